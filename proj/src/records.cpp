#include "docre/records.hpp"

#include <algorithm>

#include "json.hpp"

namespace docre {

using nlohmann::json;

std::string document_to_record(const AnnotatedDocument& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["text"] = doc.text;
  if (doc.title_length) j["title_length"] = *doc.title_length;
  j["sentence_spans"] = json::array();
  for (const auto& s : doc.sentence_spans) j["sentence_spans"].push_back({s.start, s.end});
  j["entities"] = json::array();
  for (const auto& e : doc.entities) {
    json je{{"type", e.entity_type}, {"mentions", json::array()}};
    if (!e.id.empty()) je["id"] = e.id;
    for (const auto& m : e.mentions) {
      json jm{{"text", m.text}, {"start", m.start}, {"end", m.end}};
      if (m.sentence_index) jm["sentence"] = *m.sentence_index;
      je["mentions"].push_back(std::move(jm));
    }
    j["entities"].push_back(std::move(je));
  }
  j["relations"] = json::array();
  for (const auto& r : doc.relations) {
    j["relations"].push_back({{"type", r.relation_type}, {"entities", r.entities}});
  }
  return j.dump();
}

namespace {

json parse_line(std::string_view line, std::size_t line_no) {
  try {
    auto j = json::parse(line);
    if (!j.is_object()) throw FormatError("record is not a JSON object", line_no);
    return j;
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid JSON record: ") + e.what(), line_no);
  }
}

}  // namespace

AnnotatedDocument document_from_record(std::string_view line, std::size_t line_no) {
  auto j = parse_line(line, line_no);
  AnnotatedDocument doc;
  try {
    doc.doc_id = j.at("doc_id").get<std::string>();
    doc.text = j.at("text").get<std::string>();
    if (j.contains("title_length")) doc.title_length = j["title_length"].get<std::size_t>();
    for (const auto& s : j.value("sentence_spans", json::array())) {
      doc.sentence_spans.push_back(SentenceSpan{s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
    }
    for (const auto& je : j.value("entities", json::array())) {
      Entity e;
      e.entity_type = je.at("type").get<std::string>();
      e.id = je.value("id", "");
      for (const auto& jm : je.at("mentions")) {
        std::optional<std::size_t> sentence;
        if (jm.contains("sentence")) sentence = jm["sentence"].get<std::size_t>();
        e.mentions.emplace_back(jm.at("text").get<std::string>(), jm.at("start").get<std::size_t>(),
                                jm.at("end").get<std::size_t>(), sentence);
      }
      doc.entities.push_back(std::move(e));
    }
    for (const auto& jr : j.value("relations", json::array())) {
      doc.relations.push_back(RelationInstance{jr.at("entities").get<std::vector<std::size_t>>(),
                                               jr.at("type").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed document record: ") + e.what(), line_no);
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("invalid document record: ") + e.what(), line_no);
  }
  try {
    doc.check_invariants();
  } catch (const ContractViolation& e) {
    throw FormatError(e.what(), line_no);
  }
  return doc;
}

std::string parsed_to_record(const ParsedDocument& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["relations"] = json::array();
  for (const auto& r : doc.relations) {
    json jr{{"type", r.relation_type}, {"entities", json::array()}};
    for (const auto& e : r.entities) {
      jr["entities"].push_back({{"type", e.entity_type}, {"mentions", e.mentions}});
    }
    j["relations"].push_back(std::move(jr));
  }
  return j.dump();
}

ParsedDocument parsed_from_record(std::string_view line, std::size_t line_no) {
  auto j = parse_line(line, line_no);
  ParsedDocument doc;
  try {
    doc.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& jr : j.at("relations")) {
      ParsedRelation rel;
      rel.relation_type = jr.at("type").get<std::string>();
      for (const auto& je : jr.at("entities")) {
        ParsedEntity e{je.at("mentions").get<std::vector<std::string>>(),
                       je.at("type").get<std::string>()};
        std::sort(e.mentions.begin(), e.mentions.end());
        e.mentions.erase(std::unique(e.mentions.begin(), e.mentions.end()), e.mentions.end());
        rel.entities.push_back(std::move(e));
      }
      doc.relations.push_back(std::move(rel));
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed parsed-relation record: ") + e.what(), line_no);
  }
  return doc;
}

RecordKind record_kind(std::string_view line) {
  auto j = parse_line(line, 0);
  return j.contains("text") ? RecordKind::kDocument : RecordKind::kParsed;
}

}  // namespace docre
