#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "docre/model.hpp"

namespace docre {

// Streaming reader for the PubTator layout:
//
//   <docid>|t|<title>
//   <docid>|a|<abstract>
//   <docid>\t<start>\t<end>\t<text>\t<type>\t<id>[\t...]     (annotation)
//   <docid>\t<relation>\t<id1>\t<id2>[\t<id3>...]            (relation)
//   <blank line>
//
// Text is title + " " + abstract. Annotations are grouped into entities by
// (type, id); a composite id "D1|D2" attaches the mention to both entities;
// "-1" or an empty id yields a single-mention entity. Annotation lines are
// taken in (start, end, type, id) order so reading is independent of line
// order. Mentions whose text disagrees with their offsets get the text at the
// offsets and a warning. Relation ids that name no entity are dropped with a
// warning. Sentence spans come from split_sentences over title and abstract.
class PubtatorReader {
 public:
  explicit PubtatorReader(std::istream& in) : in_(in) {}

  // Next document, or nullopt at end of input. Throws FormatError with the
  // line number on malformed input.
  std::optional<AnnotatedDocument> next();

  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  bool read_line(std::string& line);

  std::istream& in_;
  std::size_t line_no_ = 0;
  std::optional<std::string> pending_;
  std::vector<std::string> warnings_;
};

struct CorpusReadResult {
  std::vector<AnnotatedDocument> documents;
  std::vector<std::string> warnings;
};

CorpusReadResult read_pubtator(std::istream& in);

// Inverse of PubtatorReader for documents it produced.
void write_pubtator(const AnnotatedDocument& doc, std::ostream& out);

// DocRED records (fields "title", "sents", "vertexSet", "labels"). Accepts a
// JSON array or one record per line. Tokens are joined by single spaces and
// sentences by single spaces; offsets refer to that text.
CorpusReadResult read_docred(std::istream& in);
AnnotatedDocument docred_record_to_document(std::string_view record_json, std::size_t index);

// Rule-based sentence boundaries: ".", "!" or "?" (plus closing quotes or
// brackets) followed by whitespace and an uppercase letter, digit or opening
// bracket, except after common abbreviations and single-letter initials.
// Returned spans are offset by `base` and trimmed of surrounding whitespace.
std::vector<SentenceSpan> split_sentences(std::string_view text, std::size_t base = 0);

// Sentence containing the mention: its sentence_index when set, otherwise the
// last span starting at or before mention.start. nullopt without spans.
std::optional<std::size_t> sentence_of(const Mention& mention,
                                       const std::vector<SentenceSpan>& spans);

// Fills Mention::sentence_index from the document's sentence spans.
void assign_sentence_indices(AnnotatedDocument& doc);

enum class IntersentenceDefinition {
  kAnySentence,  // intra iff one sentence holds a mention of every entity
  kAllMentions,  // intra iff one sentence holds every mention of every entity
};

struct IntersentenceStats {
  std::size_t inter = 0;
  std::size_t total = 0;
  std::size_t skipped_documents = 0;
  std::vector<std::string> warnings;

  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(total);
  }
};

bool is_intersentence(const AnnotatedDocument& doc, const RelationInstance& relation,
                      IntersentenceDefinition definition);

IntersentenceStats intersentence_fraction(const std::vector<AnnotatedDocument>& docs,
                                          IntersentenceDefinition definition);

}  // namespace docre
