#pragma once

// Random inputs for property tests. Test-only.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "docre/model.hpp"
#include "docre/parser.hpp"

namespace docre::testing {

// Schema with binary and ternary relation types.
inline SchemaConfig random_schema_config(bool case_fold = true) {
  SchemaConfig::Definition def;
  def.entity_types = {{"GENE", "@GENE@"}, {"DISEASE", "@DISEASE@"}, {"DRUG", "@DRUG@"},
                      {"MUTATION", "@MUTATION@"}};
  def.relation_types = {{"GDA", {"@GDA@", 2}}, {"CID", {"@CID@", 2}}, {"DGM", {"@DGM@", 3}}};
  def.case_fold = case_fold;
  return SchemaConfig(std::move(def));
}

class DocumentGenerator {
 public:
  explicit DocumentGenerator(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }

  std::string word() {
    static const std::string kAlphabet =
        "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-'()/,.;+";
    std::string w;
    const std::size_t len = uniform(1, 6);
    for (std::size_t i = 0; i < len; ++i) w.push_back(kAlphabet[uniform(0, kAlphabet.size() - 1)]);
    if (w == ";") w = "x;";
    return w;
  }

  // 1-3 words with irregular spacing.
  std::string mention_text() {
    static const char* kGaps[] = {" ", "  ", "\t", " \n "};
    std::string text = uniform(0, 3) == 0 ? " " : "";
    const std::size_t words = uniform(1, 3);
    for (std::size_t i = 0; i < words; ++i) {
      if (i > 0) text += kGaps[uniform(0, 3)];
      text += word();
    }
    if (uniform(0, 3) == 0) text += "  ";
    return text;
  }

  // 1-6 relations of arity 2 or 3 over a pool of entities with 1-4 mentions.
  // Offsets are random so spans nest and overlap freely.
  AnnotatedDocument document(const SchemaConfig& config, const std::string& doc_id) {
    AnnotatedDocument doc;
    doc.doc_id = doc_id;
    doc.text = std::string(400, 'x');
    std::vector<std::string> labels;
    for (const auto& [label, token] : config.entity_types()) labels.push_back(label);
    std::vector<std::string> relation_labels;
    for (const auto& [label, spec] : config.relation_types()) relation_labels.push_back(label);

    const std::size_t pool = uniform(2, 8);
    for (std::size_t i = 0; i < pool; ++i) {
      Entity e;
      e.entity_type = labels[uniform(0, labels.size() - 1)];
      const std::size_t mentions = uniform(1, 4);
      for (std::size_t m = 0; m < mentions; ++m) {
        const std::size_t start = uniform(0, 380);
        const std::size_t end = start + uniform(1, 19);
        // Occasionally repeat a mention string at another position.
        std::string text = (!e.mentions.empty() && uniform(0, 5) == 0) ? e.mentions.front().text
                                                                        : mention_text();
        e.mentions.emplace_back(text, start, end);
      }
      doc.entities.push_back(std::move(e));
    }
    const std::size_t relations = uniform(1, 6);
    for (std::size_t r = 0; r < relations; ++r) {
      RelationInstance rel;
      rel.relation_type = relation_labels[uniform(0, relation_labels.size() - 1)];
      const std::size_t arity = config.arity(rel.relation_type);
      for (std::size_t k = 0; k < arity; ++k) rel.entities.push_back(uniform(0, pool - 1));
      doc.relations.push_back(std::move(rel));
    }
    return doc;
  }

  // Small entity with mentions drawn from a tiny vocabulary, so random pairs
  // overlap often.
  ParsedEntity small_entity(const std::string& type, std::size_t vocabulary) {
    ParsedEntity e;
    e.entity_type = type;
    const std::size_t n = uniform(1, 4);
    for (std::size_t i = 0; i < n; ++i) e.mentions.push_back("m" + std::to_string(uniform(0, vocabulary - 1)));
    std::sort(e.mentions.begin(), e.mentions.end());
    e.mentions.erase(std::unique(e.mentions.begin(), e.mentions.end()), e.mentions.end());
    return e;
  }

  ParsedRelation small_relation(std::size_t vocabulary) {
    ParsedRelation r;
    r.relation_type = uniform(0, 4) == 0 ? "R2" : "R1";
    r.entities.push_back(small_entity(uniform(0, 5) == 0 ? "B" : "A", vocabulary));
    r.entities.push_back(small_entity("B", vocabulary));
    return r;
  }

  std::vector<ParsedRelation> small_relation_list(std::size_t max, std::size_t vocabulary) {
    std::vector<ParsedRelation> out;
    const std::size_t n = uniform(0, max);
    for (std::size_t i = 0; i < n; ++i) out.push_back(small_relation(vocabulary));
    return dedupe_relations(std::move(out));
  }

 private:
  std::mt19937 rng_;
};

}  // namespace docre::testing
