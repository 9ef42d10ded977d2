#pragma once

// Independent reference implementations used to check the library. Test-only.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "docre/parser.hpp"

namespace docre::testing {

struct OracleCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

// Overlap test written from the definition: count shared mentions by nested
// loops, compare tp * 1 against threshold * |P| using the ratio.
inline bool oracle_entity_match(const ParsedEntity& p, const ParsedEntity& g, bool relaxed,
                                double threshold) {
  if (p.entity_type != g.entity_type) return false;
  std::set<std::string> ps(p.mentions.begin(), p.mentions.end());
  std::set<std::string> gs(g.mentions.begin(), g.mentions.end());
  if (!relaxed) return ps == gs;
  std::size_t shared = 0;
  for (const auto& m : ps) shared += gs.count(m);
  return static_cast<double>(shared) / static_cast<double>(ps.size()) > threshold;
}

inline bool oracle_relation_match(const ParsedRelation& p, const ParsedRelation& g, bool relaxed,
                                  double threshold) {
  if (p.relation_type != g.relation_type || p.entities.size() != g.entities.size()) return false;
  for (std::size_t i = 0; i < p.entities.size(); ++i) {
    if (!oracle_entity_match(p.entities[i], g.entities[i], relaxed, threshold)) return false;
  }
  return true;
}

// Tries every injective assignment of predictions to gold (or to nothing) and
// keeps the one with the most matched pairs.
inline OracleCounts brute_force_counts(const std::vector<ParsedRelation>& predicted,
                                       const std::vector<ParsedRelation>& gold, bool relaxed,
                                       double threshold = 0.5) {
  std::vector<bool> used(gold.size(), false);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> search = [&](std::size_t p, std::size_t matched) {
    if (p == predicted.size()) {
      best = std::max(best, matched);
      return;
    }
    search(p + 1, matched);
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (used[g] || !oracle_relation_match(predicted[p], gold[g], relaxed, threshold)) continue;
      used[g] = true;
      search(p + 1, matched + 1);
      used[g] = false;
    }
  };
  search(0, 0);
  return {best, predicted.size() - best, gold.size() - best};
}

}  // namespace docre::testing
