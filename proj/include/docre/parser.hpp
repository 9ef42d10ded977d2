#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "docre/model.hpp"

namespace docre {

// Mentions are normalized, pairwise distinct and sorted lexicographically.
struct ParsedEntity {
  std::vector<std::string> mentions;
  std::string entity_type;

  auto operator<=>(const ParsedEntity&) const = default;
  bool operator==(const ParsedEntity&) const = default;
};

struct ParsedRelation {
  std::vector<ParsedEntity> entities;
  std::string relation_type;

  auto operator<=>(const ParsedRelation&) const = default;
  bool operator==(const ParsedRelation&) const = default;
};

std::ostream& operator<<(std::ostream& os, const ParsedEntity& entity);
std::ostream& operator<<(std::ostream& os, const ParsedRelation& relation);

// Normalizes, sorts and dedupes mention strings; empty strings are dropped.
ParsedEntity make_parsed_entity(const std::vector<std::string>& raw_mentions,
                                std::string entity_type, const SchemaConfig& config);

// Grammar:
//   entity   := mention (COREF mention)* ENTITY_TOKEN
//   mention  := COPY+
//   relation := entity{arity} RELATION_TOKEN
//
// Malformed segments are dropped; scanning resumes after the next relation
// token. Tokens shaped like "@X@" that the schema does not define as entity or
// relation tokens (including the hint/start/end tokens) also abandon the
// current segment. Identical relations are reported once, in first-seen order.
std::vector<ParsedRelation> parse_target_string(std::string_view target,
                                                const SchemaConfig& config);

// Removes repeated relations, keeping the first occurrence.
std::vector<ParsedRelation> dedupe_relations(std::vector<ParsedRelation> relations);

// Gold relations of a document in parsed form (normalized mention sets),
// deduplicated. Relation order follows sort_relations.
std::vector<ParsedRelation> to_parsed_relations(const AnnotatedDocument& doc,
                                                const SchemaConfig& config);

using RelationMatcher = std::function<bool(const ParsedRelation& predicted, const ParsedRelation& gold)>;

// Partition of predictions and gold under a one-to-one assignment.
struct RelationDiff {
  std::vector<std::size_t> true_positives;   // prediction indices
  std::vector<std::size_t> false_positives;  // prediction indices
  std::vector<std::size_t> false_negatives;  // gold indices
  std::vector<std::ptrdiff_t> assignment;    // prediction -> gold index, -1 when unmatched

  std::size_t tp() const { return true_positives.size(); }
  std::size_t fp() const { return false_positives.size(); }
  std::size_t fn() const { return false_negatives.size(); }
};

// One-to-one matching of predictions to gold of maximum size. Predictions are
// visited in input order and each takes the first free gold it matches; when
// none is free, an augmenting path may reassign earlier predictions. Under an
// equivalence matcher (strict) this is exactly first-fit greedy.
RelationDiff diff_relations(const std::vector<ParsedRelation>& predicted,
                            const std::vector<ParsedRelation>& gold,
                            const RelationMatcher& matches);

}  // namespace docre
