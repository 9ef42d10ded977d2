#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "docre/model.hpp"
#include "docre/parser.hpp"

namespace docre {

// Entities in the order they first appear in the serialized target string,
// followed by entities that take part in no relation, in document order of
// their first mention.
std::vector<Entity> hint_entities(const AnnotatedDocument& doc);

// "<entity> ... <entity> <hint_separator> <source>", each entity rendered as in
// the target string. The source is normalized like mention text.
std::string build_hint(const std::vector<Entity>& entities, std::string_view source,
                       const SchemaConfig& config);

// build_hint over hint_entities(doc) and doc.text.
std::string build_document_hint(const AnnotatedDocument& doc, const SchemaConfig& config);

// entity type -> allowed normalized mention strings
using AllowedMentions = std::map<std::string, std::set<std::string>>;

AllowedMentions allowed_mentions_of(const std::vector<Entity>& entities,
                                    const SchemaConfig& config);

// Keeps only allowed mentions; relations with an entity left empty are dropped.
std::vector<ParsedRelation> filter_to_hinted(const std::vector<ParsedRelation>& parsed,
                                             const AllowedMentions& allowed);

}  // namespace docre
