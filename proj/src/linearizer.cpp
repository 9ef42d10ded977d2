#include "docre/linearizer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

namespace docre {

std::vector<RelationInstance> sort_relations(const AnnotatedDocument& doc) {
  std::vector<std::vector<std::size_t>> keys;
  keys.reserve(doc.relations.size());
  for (const auto& rel : doc.relations) {
    std::vector<std::size_t> key;
    key.reserve(rel.entities.size());
    for (std::size_t idx : rel.entities) key.push_back(first_position(doc.entity(idx)));
    keys.push_back(std::move(key));
  }
  std::vector<std::size_t> order(doc.relations.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  std::vector<RelationInstance> sorted;
  sorted.reserve(order.size());
  for (std::size_t i : order) sorted.push_back(doc.relations[i]);
  return sorted;
}

std::vector<std::string> ordered_mention_texts(const Entity& entity, const SchemaConfig& config) {
  std::vector<const Mention*> mentions;
  for (const auto& m : entity.mentions) mentions.push_back(&m);
  std::stable_sort(mentions.begin(), mentions.end(), [](const Mention* a, const Mention* b) {
    return mention_position(*a) < mention_position(*b);
  });
  std::vector<std::string> texts;
  std::unordered_set<std::string> seen;
  for (const Mention* m : mentions) {
    std::string norm = normalize_mention_text(m->text, config);
    if (norm.empty() || !seen.insert(norm).second) continue;
    texts.push_back(std::move(norm));
  }
  return texts;
}

std::string render_entity(const Entity& entity, const SchemaConfig& config) {
  const std::string& type_token = config.entity_token(entity.entity_type);
  auto texts = ordered_mention_texts(entity, config);
  if (texts.empty()) {
    throw LinearizationError("entity of type " + entity.entity_type +
                             " has no non-empty mention" +
                             (entity.id.empty() ? "" : " (id " + entity.id + ")"));
  }
  std::string out;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    for (const auto& tok : split_whitespace(texts[i])) {
      if (config.is_special_token(tok) || looks_like_schema_token(tok)) {
        throw LinearizationError("mention '" + texts[i] + "' contains schema-like token '" + tok +
                                 "'");
      }
    }
    if (i > 0) out += " " + config.coref_separator() + " ";
    out += texts[i];
  }
  out += " " + type_token;
  return out;
}

std::string serialize_relations(const AnnotatedDocument& doc, const SchemaConfig& config) {
  std::string out;
  for (const auto& rel : sort_relations(doc)) {
    if (rel.entities.size() != config.arity(rel.relation_type)) {
      throw LinearizationError("document " + doc.doc_id + ": relation " + rel.relation_type +
                               " has " + std::to_string(rel.entities.size()) +
                               " entities, schema arity is " +
                               std::to_string(config.arity(rel.relation_type)));
    }
    if (!out.empty()) out += ' ';
    for (std::size_t idx : rel.entities) {
      out += render_entity(doc.entity(idx), config);
      out += ' ';
    }
    out += config.relation_token(rel.relation_type);
  }
  return out;
}

std::vector<Symbol> classify_tokens(std::string_view target, const SchemaConfig& config) {
  std::vector<Symbol> symbols{Symbol::bos()};
  for (const auto& tok : split_whitespace(target)) {
    if (tok == config.coref_separator()) {
      symbols.push_back(Symbol::coref());
    } else if (auto label = config.entity_label_of(tok)) {
      symbols.push_back(Symbol::entity(*label));
    } else if (auto rlabel = config.relation_label_of(tok)) {
      symbols.push_back(Symbol::relation(*rlabel));
    } else {
      symbols.push_back(Symbol::copy());
    }
  }
  symbols.push_back(Symbol::eos());
  return symbols;
}

}  // namespace docre
