#include "docre/model.hpp"

#include <algorithm>
#include <limits>

namespace docre {

Mention::Mention(std::string text, std::size_t start, std::size_t end,
                 std::optional<std::size_t> sentence_index)
    : text(std::move(text)), start(start), end(end), sentence_index(sentence_index) {
  if (start >= end) {
    throw ContractViolation("mention '" + this->text + "' has start " + std::to_string(start) +
                            " >= end " + std::to_string(end));
  }
}

const Entity& AnnotatedDocument::entity(std::size_t index) const {
  if (index >= entities.size()) {
    throw ContractViolation("document " + doc_id + ": entity index " + std::to_string(index) +
                            " out of range");
  }
  return entities[index];
}

void AnnotatedDocument::check_invariants() const {
  for (std::size_t i = 0; i < sentence_spans.size(); ++i) {
    const auto& s = sentence_spans[i];
    if (s.start > s.end) {
      throw ContractViolation("document " + doc_id + ": inverted sentence span");
    }
    if (i > 0 && sentence_spans[i - 1].end > s.start) {
      throw ContractViolation("document " + doc_id + ": sentence spans overlap or are unordered");
    }
  }
  for (const auto& e : entities) {
    if (e.mentions.empty()) {
      throw ContractViolation("document " + doc_id + ": entity without mentions");
    }
    for (const auto& m : e.mentions) {
      if (m.start >= m.end) {
        throw ContractViolation("document " + doc_id + ": mention '" + m.text +
                                "' has start >= end");
      }
    }
  }
  for (const auto& r : relations) {
    if (r.entities.size() < 2) {
      throw ContractViolation("document " + doc_id + ": relation " + r.relation_type +
                              " has fewer than two entities");
    }
    for (std::size_t idx : r.entities) {
      if (idx >= entities.size()) {
        throw ContractViolation("document " + doc_id + ": relation " + r.relation_type +
                                " references missing entity " + std::to_string(idx));
      }
    }
  }
}

SchemaConfig::SchemaConfig(Definition definition) : def_(std::move(definition)) {
  std::vector<std::pair<std::string, std::string>> tokens;  // token, owner description
  for (const auto& [label, token] : def_.entity_types) {
    tokens.emplace_back(token, "entity type " + label);
  }
  for (const auto& [label, spec] : def_.relation_types) {
    if (spec.arity < 2) {
      throw SchemaError("relation type " + label + " (" + spec.token + ") has arity " +
                        std::to_string(spec.arity) + "; arity must be at least 2");
    }
    tokens.emplace_back(spec.token, "relation type " + label);
    max_arity_ = std::max(max_arity_, spec.arity);
  }
  tokens.emplace_back(def_.coref_separator, "coref_separator");
  tokens.emplace_back(def_.hint_separator, "hint_separator");
  tokens.emplace_back(def_.start_token, "start_token");
  tokens.emplace_back(def_.end_token, "end_token");

  for (const auto& [token, owner] : tokens) {
    if (token.empty()) {
      throw SchemaError(owner + " has an empty token");
    }
    if (std::any_of(token.begin(), token.end(), is_space)) {
      throw SchemaError(owner + " token '" + token + "' contains whitespace");
    }
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    for (std::size_t j = 0; j < tokens.size(); ++j) {
      if (i == j) continue;
      const auto& a = tokens[i].first;
      const auto& b = tokens[j].first;
      if (a == b) {
        throw SchemaError("duplicate special token '" + a + "' (" + tokens[i].second + ", " +
                          tokens[j].second + ")");
      }
      if (b.find(a) != std::string::npos) {
        throw SchemaError("special token '" + a + "' (" + tokens[i].second +
                          ") is a substring of '" + b + "' (" + tokens[j].second + ")");
      }
    }
  }

  for (const auto& [label, token] : def_.entity_types) entity_by_token_.emplace(token, label);
  for (const auto& [label, spec] : def_.relation_types) relation_by_token_.emplace(spec.token, label);
}

const std::string& SchemaConfig::entity_token(const std::string& label) const {
  auto it = def_.entity_types.find(label);
  if (it == def_.entity_types.end()) {
    throw ContractViolation("unknown entity type '" + label + "'");
  }
  return it->second;
}

const std::string& SchemaConfig::relation_token(const std::string& label) const {
  auto it = def_.relation_types.find(label);
  if (it == def_.relation_types.end()) {
    throw ContractViolation("unknown relation type '" + label + "'");
  }
  return it->second.token;
}

std::size_t SchemaConfig::arity(const std::string& relation_label) const {
  auto it = def_.relation_types.find(relation_label);
  if (it == def_.relation_types.end()) {
    throw ContractViolation("unknown relation type '" + relation_label + "'");
  }
  return it->second.arity;
}

std::optional<std::string> SchemaConfig::entity_label_of(std::string_view token) const {
  auto it = entity_by_token_.find(std::string(token));
  if (it == entity_by_token_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> SchemaConfig::relation_label_of(std::string_view token) const {
  auto it = relation_by_token_.find(std::string(token));
  if (it == relation_by_token_.end()) return std::nullopt;
  return it->second;
}

bool SchemaConfig::is_special_token(std::string_view token) const {
  return token == def_.coref_separator || token == def_.hint_separator ||
         token == def_.start_token || token == def_.end_token ||
         entity_by_token_.count(std::string(token)) > 0 ||
         relation_by_token_.count(std::string(token)) > 0;
}

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string normalize_whitespace(std::string_view raw, bool case_fold) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    if (case_fold && c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    out.push_back(c);
  }
  return out;
}

std::string normalize_mention_text(std::string_view raw, const SchemaConfig& config) {
  return normalize_whitespace(raw, config.case_fold());
}

std::size_t first_position(const Entity& entity) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const auto& m : entity.mentions) best = std::min(best, mention_position(m));
  return best;
}

std::vector<std::string> split_whitespace(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return tokens;
}

bool looks_like_schema_token(std::string_view token) {
  return token.size() >= 3 && token.front() == '@' && token.back() == '@';
}

}  // namespace docre
