#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "docre/model.hpp"
#include "docre/tokens.hpp"

namespace docre {

// Relations ordered by the first-mention positions of their entities, in
// tuple order. Stable on full ties.
std::vector<RelationInstance> sort_relations(const AnnotatedDocument& doc);

// Normalized, deduplicated mention strings of an entity in document order of
// first occurrence. Empty normalized mentions are dropped.
std::vector<std::string> ordered_mention_texts(const Entity& entity, const SchemaConfig& config);

// "m1 ; m2 @TYPE@". Throws LinearizationError when the entity has no
// non-empty mention, or a mention contains a token the parser would read as a
// schema token.
std::string render_entity(const Entity& entity, const SchemaConfig& config);

std::string serialize_relations(const AnnotatedDocument& doc, const SchemaConfig& config);

// Maps each whitespace token to COREF / ENTITY / RELATION / COPY, framed by
// BOS and EOS.
std::vector<Symbol> classify_tokens(std::string_view target, const SchemaConfig& config);

}  // namespace docre
