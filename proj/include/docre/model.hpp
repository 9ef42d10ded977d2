#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "docre/errors.hpp"

namespace docre {

// A span of document text. Offsets are character (byte) offsets, end exclusive.
// Discontinuous mentions carry their surface string with the covering span.
struct Mention {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<std::size_t> sentence_index;

  Mention() = default;
  Mention(std::string text, std::size_t start, std::size_t end,
          std::optional<std::size_t> sentence_index = std::nullopt);

  bool operator==(const Mention&) const = default;
};

// A typed cluster of coreferent mentions. `id` is the corpus identifier
// (e.g. a MeSH id) when one exists, empty otherwise.
struct Entity {
  std::vector<Mention> mentions;
  std::string entity_type;
  std::string id;

  bool operator==(const Entity&) const = default;
};

// A typed, ordered tuple of entities, stored as indices into
// AnnotatedDocument::entities.
struct RelationInstance {
  std::vector<std::size_t> entities;
  std::string relation_type;

  bool operator==(const RelationInstance&) const = default;
};

struct SentenceSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const SentenceSpan&) const = default;
};

struct AnnotatedDocument {
  std::string doc_id;
  std::string text;
  std::vector<SentenceSpan> sentence_spans;
  std::vector<Entity> entities;
  std::vector<RelationInstance> relations;
  // Length of the title prefix for corpora that have one (PubTator).
  std::optional<std::size_t> title_length;

  bool operator==(const AnnotatedDocument&) const = default;

  const Entity& entity(std::size_t index) const;

  // Throws ContractViolation when spans overlap, are unordered, a mention
  // has start >= end, an entity is empty, or a relation index is dangling.
  void check_invariants() const;
};

struct RelationTypeSpec {
  std::string token;
  std::size_t arity = 2;

  bool operator==(const RelationTypeSpec&) const = default;
};

// The special-token vocabulary of the linearization schema. Immutable once
// constructed; the constructor rejects inconsistent vocabularies.
class SchemaConfig {
 public:
  struct Definition {
    std::map<std::string, std::string> entity_types;          // label -> token
    std::map<std::string, RelationTypeSpec> relation_types;   // label -> token, arity
    std::string coref_separator = ";";
    std::string hint_separator = "@SEP@";
    std::string start_token = "@START@";
    std::string end_token = "@END@";
    bool case_fold = true;
  };

  explicit SchemaConfig(Definition definition);

  const Definition& definition() const { return def_; }
  const std::map<std::string, std::string>& entity_types() const { return def_.entity_types; }
  const std::map<std::string, RelationTypeSpec>& relation_types() const { return def_.relation_types; }
  const std::string& coref_separator() const { return def_.coref_separator; }
  const std::string& hint_separator() const { return def_.hint_separator; }
  const std::string& start_token() const { return def_.start_token; }
  const std::string& end_token() const { return def_.end_token; }
  bool case_fold() const { return def_.case_fold; }

  // Label lookups throw ContractViolation for unknown labels.
  const std::string& entity_token(const std::string& label) const;
  const std::string& relation_token(const std::string& label) const;
  std::size_t arity(const std::string& relation_label) const;
  std::size_t max_arity() const { return max_arity_; }

  std::optional<std::string> entity_label_of(std::string_view token) const;
  std::optional<std::string> relation_label_of(std::string_view token) const;
  bool is_special_token(std::string_view token) const;

 private:
  Definition def_;
  std::unordered_map<std::string, std::string> entity_by_token_;
  std::unordered_map<std::string, std::string> relation_by_token_;
  std::size_t max_arity_ = 0;
};

// Strips leading/trailing whitespace, collapses internal runs to one space,
// and lowercases ASCII letters when the schema folds case.
std::string normalize_mention_text(std::string_view raw, const SchemaConfig& config);
std::string normalize_whitespace(std::string_view raw, bool case_fold);

// Sort key of a mention: start + end.
inline std::size_t mention_position(const Mention& m) { return m.start + m.end; }

// Smallest mention_position over the entity's mentions.
std::size_t first_position(const Entity& entity);

std::vector<std::string> split_whitespace(std::string_view text);

bool is_space(char c);

// Tokens shaped like schema control tokens: "@...@" with a non-empty body.
bool looks_like_schema_token(std::string_view token);

}  // namespace docre
