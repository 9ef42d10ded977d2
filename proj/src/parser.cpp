#include "docre/parser.hpp"

#include <algorithm>
#include <set>

#include "docre/linearizer.hpp"

namespace docre {

std::ostream& operator<<(std::ostream& os, const ParsedEntity& entity) {
  os << "[{";
  for (std::size_t i = 0; i < entity.mentions.size(); ++i) {
    if (i > 0) os << ", ";
    os << '"' << entity.mentions[i] << '"';
  }
  return os << "} " << entity.entity_type << "]";
}

std::ostream& operator<<(std::ostream& os, const ParsedRelation& relation) {
  os << relation.relation_type << "(";
  for (std::size_t i = 0; i < relation.entities.size(); ++i) {
    if (i > 0) os << ", ";
    os << relation.entities[i];
  }
  return os << ")";
}

ParsedEntity make_parsed_entity(const std::vector<std::string>& raw_mentions,
                                std::string entity_type, const SchemaConfig& config) {
  ParsedEntity entity;
  entity.entity_type = std::move(entity_type);
  for (const auto& raw : raw_mentions) {
    auto norm = normalize_mention_text(raw, config);
    if (!norm.empty()) entity.mentions.push_back(std::move(norm));
  }
  std::sort(entity.mentions.begin(), entity.mentions.end());
  entity.mentions.erase(std::unique(entity.mentions.begin(), entity.mentions.end()),
                        entity.mentions.end());
  return entity;
}

namespace {

class SegmentScanner {
 public:
  explicit SegmentScanner(const SchemaConfig& config) : config_(config) {}

  void copy(const std::string& token) {
    if (!mention_.empty()) mention_ += ' ';
    mention_ += token;
  }

  void coref() {
    if (mention_.empty()) {
      broken_ = true;
      return;
    }
    mentions_.push_back(std::move(mention_));
    mention_.clear();
  }

  void entity(const std::string& label) {
    if (mention_.empty()) {
      broken_ = true;
      return;
    }
    mentions_.push_back(std::move(mention_));
    mention_.clear();
    auto parsed = make_parsed_entity(mentions_, label, config_);
    mentions_.clear();
    // Every raw mention must survive normalization; "a ;  @GENE@" style
    // segments are already caught above.
    if (parsed.mentions.empty()) {
      broken_ = true;
      return;
    }
    entities_.push_back(std::move(parsed));
  }

  void relation(const std::string& label, std::vector<ParsedRelation>& out) {
    bool complete = !broken_ && mention_.empty() && mentions_.empty() &&
                    entities_.size() == config_.arity(label);
    if (complete) out.push_back(ParsedRelation{std::move(entities_), label});
    reset();
  }

  void reset() {
    mention_.clear();
    mentions_.clear();
    entities_.clear();
    broken_ = false;
  }

 private:
  const SchemaConfig& config_;
  std::string mention_;
  std::vector<std::string> mentions_;
  std::vector<ParsedEntity> entities_;
  bool broken_ = false;
};

}  // namespace

std::vector<ParsedRelation> parse_target_string(std::string_view target,
                                                const SchemaConfig& config) {
  std::vector<ParsedRelation> relations;
  SegmentScanner scanner(config);
  for (const auto& tok : split_whitespace(target)) {
    if (tok == config.coref_separator()) {
      scanner.coref();
    } else if (auto label = config.entity_label_of(tok)) {
      scanner.entity(*label);
    } else if (auto rlabel = config.relation_label_of(tok)) {
      scanner.relation(*rlabel, relations);
    } else if (config.is_special_token(tok) || looks_like_schema_token(tok)) {
      scanner.reset();
    } else {
      scanner.copy(tok);
    }
  }
  return dedupe_relations(std::move(relations));
}

std::vector<ParsedRelation> dedupe_relations(std::vector<ParsedRelation> relations) {
  std::set<ParsedRelation> seen;
  std::vector<ParsedRelation> unique;
  unique.reserve(relations.size());
  for (auto& rel : relations) {
    if (seen.insert(rel).second) unique.push_back(std::move(rel));
  }
  return unique;
}

std::vector<ParsedRelation> to_parsed_relations(const AnnotatedDocument& doc,
                                                const SchemaConfig& config) {
  std::vector<ParsedRelation> out;
  for (const auto& rel : sort_relations(doc)) {
    ParsedRelation parsed;
    parsed.relation_type = rel.relation_type;
    for (std::size_t idx : rel.entities) {
      const Entity& e = doc.entity(idx);
      std::vector<std::string> raw;
      raw.reserve(e.mentions.size());
      for (const auto& m : e.mentions) raw.push_back(m.text);
      auto entity = make_parsed_entity(raw, e.entity_type, config);
      if (entity.mentions.empty()) {
        throw LinearizationError("document " + doc.doc_id + ": entity of type " + e.entity_type +
                                 " has no non-empty mention");
      }
      parsed.entities.push_back(std::move(entity));
    }
    out.push_back(std::move(parsed));
  }
  return dedupe_relations(std::move(out));
}

namespace {

bool augment(std::size_t p, const std::vector<std::vector<std::size_t>>& edges,
             std::vector<std::ptrdiff_t>& gold_owner, std::vector<bool>& visited) {
  for (std::size_t g : edges[p]) {
    if (visited[g]) continue;
    visited[g] = true;
    if (gold_owner[g] < 0 ||
        augment(static_cast<std::size_t>(gold_owner[g]), edges, gold_owner, visited)) {
      gold_owner[g] = static_cast<std::ptrdiff_t>(p);
      return true;
    }
  }
  return false;
}

}  // namespace

RelationDiff diff_relations(const std::vector<ParsedRelation>& predicted,
                            const std::vector<ParsedRelation>& gold,
                            const RelationMatcher& matches) {
  std::vector<std::vector<std::size_t>> edges(predicted.size());
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (matches(predicted[p], gold[g])) edges[p].push_back(g);
    }
  }

  std::vector<std::ptrdiff_t> gold_owner(gold.size(), -1);
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    // First-fit pass keeps the common case identical to greedy matching.
    bool placed = false;
    for (std::size_t g : edges[p]) {
      if (gold_owner[g] < 0) {
        gold_owner[g] = static_cast<std::ptrdiff_t>(p);
        placed = true;
        break;
      }
    }
    if (!placed) {
      std::vector<bool> visited(gold.size(), false);
      augment(p, edges, gold_owner, visited);
    }
  }

  RelationDiff diff;
  diff.assignment.assign(predicted.size(), -1);
  for (std::size_t g = 0; g < gold.size(); ++g) {
    if (gold_owner[g] >= 0) {
      diff.assignment[static_cast<std::size_t>(gold_owner[g])] = static_cast<std::ptrdiff_t>(g);
    } else {
      diff.false_negatives.push_back(g);
    }
  }
  for (std::size_t p = 0; p < predicted.size(); ++p) {
    (diff.assignment[p] >= 0 ? diff.true_positives : diff.false_positives).push_back(p);
  }
  return diff;
}

}  // namespace docre
