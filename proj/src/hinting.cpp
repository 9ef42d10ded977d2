#include "docre/hinting.hpp"

#include <algorithm>
#include <numeric>

#include "docre/linearizer.hpp"

namespace docre {

std::vector<Entity> hint_entities(const AnnotatedDocument& doc) {
  std::vector<bool> taken(doc.entities.size(), false);
  std::vector<Entity> out;
  for (const auto& rel : sort_relations(doc)) {
    for (std::size_t idx : rel.entities) {
      const Entity& e = doc.entity(idx);
      if (taken[idx]) continue;
      taken[idx] = true;
      out.push_back(e);
    }
  }
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < doc.entities.size(); ++i) {
    if (!taken[i]) rest.push_back(i);
  }
  std::stable_sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    return first_position(doc.entities[a]) < first_position(doc.entities[b]);
  });
  for (std::size_t i : rest) out.push_back(doc.entities[i]);
  return out;
}

std::string build_hint(const std::vector<Entity>& entities, std::string_view source,
                       const SchemaConfig& config) {
  std::string out;
  for (const auto& e : entities) {
    if (e.mentions.empty()) {
      throw LinearizationError("cannot hint entity of type " + e.entity_type +
                               " without mentions");
    }
    out += render_entity(e, config);
    out += ' ';
  }
  out += config.hint_separator();
  auto body = normalize_mention_text(source, config);
  if (!body.empty()) {
    out += ' ';
    out += body;
  }
  return out;
}

std::string build_document_hint(const AnnotatedDocument& doc, const SchemaConfig& config) {
  return build_hint(hint_entities(doc), doc.text, config);
}

AllowedMentions allowed_mentions_of(const std::vector<Entity>& entities,
                                    const SchemaConfig& config) {
  AllowedMentions allowed;
  for (const auto& e : entities) {
    auto& bucket = allowed[e.entity_type];
    for (const auto& m : e.mentions) {
      auto norm = normalize_mention_text(m.text, config);
      if (!norm.empty()) bucket.insert(std::move(norm));
    }
  }
  return allowed;
}

std::vector<ParsedRelation> filter_to_hinted(const std::vector<ParsedRelation>& parsed,
                                             const AllowedMentions& allowed) {
  std::vector<ParsedRelation> out;
  for (const auto& rel : parsed) {
    ParsedRelation kept{{}, rel.relation_type};
    bool complete = true;
    for (const auto& entity : rel.entities) {
      ParsedEntity filtered{{}, entity.entity_type};
      auto it = allowed.find(entity.entity_type);
      if (it != allowed.end()) {
        std::copy_if(entity.mentions.begin(), entity.mentions.end(),
                     std::back_inserter(filtered.mentions),
                     [&](const std::string& m) { return it->second.count(m) > 0; });
      }
      if (filtered.mentions.empty()) {
        complete = false;
        break;
      }
      kept.entities.push_back(std::move(filtered));
    }
    if (complete) out.push_back(std::move(kept));
  }
  return dedupe_relations(std::move(out));
}

}  // namespace docre
