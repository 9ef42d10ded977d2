#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "docre/parser.hpp"

namespace docre {

enum class MatchMode { kStrict, kRelaxed };

class MatchCriterion {
 public:
  // Throws ContractViolation unless 0 < relaxed_threshold < 1.
  explicit MatchCriterion(MatchMode mode = MatchMode::kStrict, double relaxed_threshold = 0.5);

  static MatchCriterion strict() { return MatchCriterion(MatchMode::kStrict); }
  static MatchCriterion relaxed(double threshold = 0.5) {
    return MatchCriterion(MatchMode::kRelaxed, threshold);
  }

  MatchMode mode() const { return mode_; }
  double relaxed_threshold() const { return threshold_; }

 private:
  MatchMode mode_;
  double threshold_;
};

// Strict: same type, equal mention sets. Relaxed: same type and
// |P ∩ G| / |P| > threshold. Throws ContractViolation if `predicted` has no
// mentions. Mention lists must be sorted and unique (ParsedEntity invariant).
bool entity_match(const ParsedEntity& predicted, const ParsedEntity& gold,
                  const MatchCriterion& criterion);

// Same type and arity, entities matching pairwise in tuple order.
bool relation_match(const ParsedRelation& predicted, const ParsedRelation& gold,
                    const MatchCriterion& criterion);

RelationMatcher relation_matcher(const MatchCriterion& criterion);

RelationDiff diff_relations(const std::vector<ParsedRelation>& predicted,
                            const std::vector<ParsedRelation>& gold,
                            const MatchCriterion& criterion);

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  double precision() const;
  double recall() const;
  double f1() const;

  Counts& operator+=(const Counts& other);
  bool operator==(const Counts&) const = default;
};

struct ScoreReport {
  Counts overall;
  std::map<std::string, Counts> per_type;
};

using DocumentRelations = std::map<std::string, std::vector<ParsedRelation>>;

// Micro-averaged scores. Documents are matched independently and their counts
// pooled. Throws Error listing the ids present on only one side.
ScoreReport score(const DocumentRelations& predicted, const DocumentRelations& gold,
                  const MatchCriterion& criterion, std::size_t jobs = 1);

// Directed acyclic parent relation over identifiers plus a lexicon from
// normalized mention strings to identifiers.
class Hierarchy {
 public:
  void add_edge(const std::string& child, const std::string& parent);
  // `mention` should already be normalized the way parsed mentions are.
  void add_name(const std::string& id, const std::string& mention);

  // Edge file: "child<TAB>parent" per line. Lexicon file: "id<TAB>mention".
  // '#' lines and blank lines are ignored. Names are normalized with `config`.
  // Throws FormatError on malformed lines and on cycles.
  static Hierarchy load(std::istream& edges, std::istream* lexicon, const SchemaConfig& config);

  // Throws FormatError naming a node on a cycle.
  void check_acyclic() const;

  std::set<std::string> ids_of(const std::string& mention) const;
  std::set<std::string> ids_of(const ParsedEntity& entity) const;
  std::set<std::string> ancestors(const std::string& id) const;
  bool is_strict_ancestor(const std::string& ancestor, const std::string& descendant) const;

  std::size_t edge_count() const;
  std::size_t name_count() const { return names_.size(); }

 private:
  std::map<std::string, std::set<std::string>> parents_;
  std::map<std::string, std::set<std::string>> names_;
};

// Drops unmatched predictions whose leading entities match a gold relation of
// the same type and whose last entity resolves to a strict ancestor of that
// gold relation's last entity. Matched predictions are never touched.
DocumentRelations filter_hypernyms(const DocumentRelations& predicted,
                                   const DocumentRelations& gold, const Hierarchy& hierarchy,
                                   const MatchCriterion& criterion = MatchCriterion::strict());

std::string format_report_table(const ScoreReport& report, bool per_type);
std::string report_to_json(const ScoreReport& report, const MatchCriterion& criterion);

}  // namespace docre
