#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "docre/model.hpp"
#include "docre/parser.hpp"

namespace docre {

// One JSON object per line.
//
// Document record:
//   {"doc_id": "...", "text": "...", "title_length": 42,            (optional)
//    "sentence_spans": [[start, end], ...],
//    "entities": [{"type": "Chemical", "id": "D002220",             (id optional)
//                  "mentions": [{"text": "...", "start": 0, "end": 13,
//                                "sentence": 0}]}],                 (sentence optional)
//    "relations": [{"type": "CID", "entities": [0, 1]}]}
//
// Parsed-relation record (output of parsing target strings):
//   {"doc_id": "...",
//    "relations": [{"type": "GDA",
//                   "entities": [{"type": "GENE", "mentions": ["a", "b"]}, ...]}]}
std::string document_to_record(const AnnotatedDocument& doc);
AnnotatedDocument document_from_record(std::string_view line, std::size_t line_no = 0);

struct ParsedDocument {
  std::string doc_id;
  std::vector<ParsedRelation> relations;

  bool operator==(const ParsedDocument&) const = default;
};

std::string parsed_to_record(const ParsedDocument& doc);
ParsedDocument parsed_from_record(std::string_view line, std::size_t line_no = 0);

enum class RecordKind { kDocument, kParsed };

// Document records carry "text"; parsed records do not.
RecordKind record_kind(std::string_view line);

}  // namespace docre
