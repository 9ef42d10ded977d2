#include "docre/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace docre {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    auto tab = line.find('\t', begin);
    fields.push_back(line.substr(begin, tab == std::string::npos ? std::string::npos : tab - begin));
    if (tab == std::string::npos) break;
    begin = tab + 1;
  }
  return fields;
}

std::vector<std::string> split_ids(const std::string& field) {
  std::vector<std::string> ids;
  std::size_t begin = 0;
  while (true) {
    auto bar = field.find('|', begin);
    ids.push_back(field.substr(begin, bar == std::string::npos ? std::string::npos : bar - begin));
    if (bar == std::string::npos) break;
    begin = bar + 1;
  }
  return ids;
}

std::optional<std::size_t> parse_offset(const std::string& s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return std::nullopt;
  }
  try {
    return std::stoul(s);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_anonymous_id(const std::string& id) { return id.empty() || id == "-1"; }

struct Annotation {
  std::size_t start;
  std::size_t end;
  std::string type;
  std::string ids;
  std::string text;
  std::size_t line;

  auto key() const { return std::tie(start, end, type, ids); }
};

struct RelationLine {
  std::string type;
  std::vector<std::string> ids;
  std::size_t line;
};

}  // namespace

bool PubtatorReader::read_line(std::string& line) {
  if (pending_) {
    line = std::move(*pending_);
    pending_.reset();
    return true;
  }
  if (!std::getline(in_, line)) return false;
  ++line_no_;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::optional<AnnotatedDocument> PubtatorReader::next() {
  std::string line;
  do {
    if (!read_line(line)) return std::nullopt;
  } while (std::all_of(line.begin(), line.end(), is_space));

  auto parse_header = [&](const std::string& l, char kind) -> std::pair<std::string, std::string> {
    const std::string marker = std::string("|") + kind + "|";
    auto pos = l.find(marker);
    if (pos == std::string::npos || pos == 0 || l.find('\t') < pos) {
      throw FormatError(std::string("expected '<docid>") + marker + "...' line", line_no_);
    }
    return {l.substr(0, pos), l.substr(pos + marker.size())};
  };

  AnnotatedDocument doc;
  auto [doc_id, title] = parse_header(line, 't');
  doc.doc_id = doc_id;
  if (!read_line(line)) throw FormatError("document " + doc_id + " has no abstract line", line_no_);
  auto [abstract_id, abstract] = parse_header(line, 'a');
  if (abstract_id != doc_id) {
    throw FormatError("abstract line id " + abstract_id + " does not match title id " + doc_id,
                      line_no_);
  }
  doc.text = title + " " + abstract;
  doc.title_length = title.size();

  std::vector<Annotation> annotations;
  std::vector<RelationLine> relation_lines;
  while (read_line(line)) {
    if (std::all_of(line.begin(), line.end(), is_space)) break;
    if (line.find('\t') == std::string::npos && line.find("|t|") != std::string::npos) {
      // Next document without a blank separator.
      pending_ = line;
      break;
    }
    auto fields = split_tabs(line);
    if (fields[0] != doc_id) {
      throw FormatError("line belongs to document '" + fields[0] + "' inside document " + doc_id,
                        line_no_);
    }
    auto start = fields.size() >= 5 ? parse_offset(fields[1]) : std::nullopt;
    auto end = fields.size() >= 5 ? parse_offset(fields[2]) : std::nullopt;
    if (start && end) {
      if (*start >= *end || *end > doc.text.size()) {
        throw FormatError("annotation offsets [" + fields[1] + ", " + fields[2] +
                              ") outside document text of length " +
                              std::to_string(doc.text.size()),
                          line_no_);
      }
      annotations.push_back(Annotation{*start, *end, fields[4],
                                       fields.size() >= 6 ? fields[5] : std::string(), fields[3],
                                       line_no_});
    } else if (fields.size() >= 4 && !parse_offset(fields[1])) {
      RelationLine rel{fields[1], {fields.begin() + 2, fields.end()}, line_no_};
      if (std::any_of(rel.ids.begin(), rel.ids.end(), [](const std::string& s) { return s.empty(); })) {
        throw FormatError("relation line has an empty identifier", line_no_);
      }
      relation_lines.push_back(std::move(rel));
    } else {
      throw FormatError("unrecognized line in document " + doc_id, line_no_);
    }
  }

  std::stable_sort(annotations.begin(), annotations.end(),
                   [](const Annotation& a, const Annotation& b) { return a.key() < b.key(); });
  annotations.erase(std::unique(annotations.begin(), annotations.end(),
                                [](const Annotation& a, const Annotation& b) {
                                  return a.key() == b.key();
                                }),
                    annotations.end());

  std::map<std::pair<std::string, std::string>, std::size_t> by_type_and_id;
  for (const auto& a : annotations) {
    std::string surface = doc.text.substr(a.start, a.end - a.start);
    if (surface != a.text) {
      warnings_.push_back("line " + std::to_string(a.line) + ": mention text '" + a.text +
                          "' disagrees with offsets; using '" + surface + "'");
    }
    Mention mention(surface, a.start, a.end);
    std::set<std::string> attached;
    for (const auto& id : split_ids(a.ids)) {
      if (is_anonymous_id(id)) {
        doc.entities.push_back(Entity{{mention}, a.type, id});
        continue;
      }
      if (!attached.insert(id).second) continue;
      auto [it, inserted] = by_type_and_id.emplace(std::make_pair(a.type, id), doc.entities.size());
      if (inserted) doc.entities.push_back(Entity{{}, a.type, id});
      doc.entities[it->second].mentions.push_back(mention);
    }
  }

  for (const auto& rl : relation_lines) {
    RelationInstance rel;
    rel.relation_type = rl.type;
    bool resolved = true;
    for (const auto& id : rl.ids) {
      auto it = std::find_if(doc.entities.begin(), doc.entities.end(),
                             [&](const Entity& e) { return !is_anonymous_id(e.id) && e.id == id; });
      if (it == doc.entities.end()) {
        warnings_.push_back("line " + std::to_string(rl.line) + ": relation " + rl.type +
                            " references unannotated id " + id + "; relation dropped");
        resolved = false;
        break;
      }
      rel.entities.push_back(static_cast<std::size_t>(it - doc.entities.begin()));
    }
    if (resolved) doc.relations.push_back(std::move(rel));
  }

  doc.sentence_spans = split_sentences(std::string_view(doc.text).substr(0, title.size()), 0);
  auto abstract_spans = split_sentences(abstract, title.size() + 1);
  doc.sentence_spans.insert(doc.sentence_spans.end(), abstract_spans.begin(), abstract_spans.end());
  assign_sentence_indices(doc);
  return doc;
}

CorpusReadResult read_pubtator(std::istream& in) {
  PubtatorReader reader(in);
  CorpusReadResult result;
  while (auto doc = reader.next()) result.documents.push_back(std::move(*doc));
  result.warnings = reader.warnings();
  return result;
}

void write_pubtator(const AnnotatedDocument& doc, std::ostream& out) {
  const std::size_t title_len = doc.title_length.value_or(doc.text.size());
  const std::string title = doc.text.substr(0, title_len);
  const std::string abstract = title_len < doc.text.size() ? doc.text.substr(title_len + 1) : "";
  out << doc.doc_id << "|t|" << title << '\n' << doc.doc_id << "|a|" << abstract << '\n';

  // (start, end, type, text) -> ids in entity order; anonymous ids stay on their own line.
  using SpanKey = std::tuple<std::size_t, std::size_t, std::string, std::string>;
  std::map<SpanKey, std::vector<std::string>> shared;
  std::vector<std::pair<SpanKey, std::string>> lines;
  for (const auto& e : doc.entities) {
    for (const auto& m : e.mentions) {
      SpanKey key{m.start, m.end, e.entity_type, m.text};
      if (is_anonymous_id(e.id)) {
        lines.emplace_back(key, e.id);
      } else {
        auto& ids = shared[key];
        if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) ids.push_back(e.id);
      }
    }
  }
  for (const auto& [key, ids] : shared) {
    std::string joined;
    for (const auto& id : ids) joined += (joined.empty() ? "" : "|") + id;
    lines.emplace_back(key, joined);
  }
  std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
    const auto& [as, ae, at, ax] = a.first;
    const auto& [bs, be, bt, bx] = b.first;
    return std::tie(as, ae, at, a.second) < std::tie(bs, be, bt, b.second);
  });
  for (const auto& [key, ids] : lines) {
    const auto& [start, end, type, text] = key;
    out << doc.doc_id << '\t' << start << '\t' << end << '\t' << text << '\t' << type << '\t'
        << ids << '\n';
  }
  for (const auto& rel : doc.relations) {
    out << doc.doc_id << '\t' << rel.relation_type;
    for (std::size_t idx : rel.entities) {
      const auto& id = doc.entity(idx).id;
      if (is_anonymous_id(id)) {
        throw FormatError("document " + doc.doc_id + ": relation " + rel.relation_type +
                          " involves an entity without identifier");
      }
      out << '\t' << id;
    }
    out << '\n';
  }
  out << '\n';
}

namespace {

std::size_t record_offset(const std::vector<std::size_t>& token_starts, std::size_t token,
                          std::size_t index, const std::string& what) {
  if (token >= token_starts.size()) {
    throw FormatError("DocRED record " + std::to_string(index) + ": " + what +
                      " token position out of range");
  }
  return token_starts[token];
}

}  // namespace

AnnotatedDocument docred_record_to_document(std::string_view record_json, std::size_t index) {
  nlohmann::json record;
  try {
    record = nlohmann::json::parse(record_json);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("DocRED record " + std::to_string(index) + ": " + e.what());
  }
  const std::string where = "DocRED record " + std::to_string(index);
  if (!record.is_object() || !record.contains("sents") || !record.contains("vertexSet")) {
    throw FormatError(where + ": missing 'sents' or 'vertexSet'");
  }
  AnnotatedDocument doc;
  doc.doc_id = record.value("title", "docred-" + std::to_string(index));

  try {
    // Token character offsets per sentence.
    std::vector<std::vector<std::size_t>> starts;
    std::vector<std::vector<std::size_t>> ends;
    for (const auto& sent : record.at("sents")) {
      if (!doc.text.empty()) doc.text += ' ';
      const std::size_t sent_start = doc.text.size();
      auto& s = starts.emplace_back();
      auto& e = ends.emplace_back();
      for (std::size_t t = 0; t < sent.size(); ++t) {
        if (t > 0) doc.text += ' ';
        s.push_back(doc.text.size());
        doc.text += sent[t].get<std::string>();
        e.push_back(doc.text.size());
      }
      doc.sentence_spans.push_back(SentenceSpan{sent_start, doc.text.size()});
    }

    for (const auto& vertex : record.at("vertexSet")) {
      Entity entity;
      for (const auto& m : vertex) {
        const auto sent_id = m.at("sent_id").get<std::size_t>();
        const auto& pos = m.at("pos");
        if (sent_id >= starts.size() || pos.size() != 2) {
          throw FormatError(where + ": mention '" + m.value("name", "") + "' has invalid position");
        }
        const auto first = pos[0].get<std::size_t>();
        const auto last = pos[1].get<std::size_t>();
        if (first >= last) {
          throw FormatError(where + ": mention '" + m.value("name", "") + "' has empty token span");
        }
        const std::size_t start = record_offset(starts[sent_id], first, index, "mention start");
        const std::size_t end = record_offset(ends[sent_id], last - 1, index, "mention end");
        if (start >= end) {
          throw FormatError(where + ": mention '" + m.value("name", "") + "' covers no text");
        }
        entity.mentions.emplace_back(doc.text.substr(start, end - start), start, end, sent_id);
        if (entity.entity_type.empty()) entity.entity_type = m.value("type", "");
      }
      if (entity.mentions.empty()) throw FormatError(where + ": vertex without mentions");
      doc.entities.push_back(std::move(entity));
    }

    if (record.contains("labels")) {
      for (const auto& label : record.at("labels")) {
        const auto head = label.at("h").get<std::size_t>();
        const auto tail = label.at("t").get<std::size_t>();
        if (head >= doc.entities.size() || tail >= doc.entities.size()) {
          throw FormatError(where + ": label references missing vertex " +
                            std::to_string(std::max(head, tail)));
        }
        doc.relations.push_back(RelationInstance{{head, tail}, label.at("r").get<std::string>()});
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + ": " + e.what());
  }
  return doc;
}

CorpusReadResult read_docred(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();
  auto first = content.find_first_not_of(" \t\r\n");
  CorpusReadResult result;
  if (first == std::string::npos) return result;

  if (content[first] == '[') {
    nlohmann::json records;
    try {
      records = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("DocRED file is not valid JSON: ") + e.what());
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
      result.documents.push_back(docred_record_to_document(records[i].dump(), i));
    }
    return result;
  }
  std::istringstream lines(content);
  std::string line;
  std::size_t index = 0;
  while (std::getline(lines, line)) {
    if (std::all_of(line.begin(), line.end(), is_space)) continue;
    result.documents.push_back(docred_record_to_document(line, index++));
  }
  return result;
}

namespace {

bool is_abbreviation(std::string_view word) {
  static const std::array<std::string_view, 22> kAbbrev = {
      "e.g", "i.e", "vs", "al", "fig", "figs", "dr", "mr", "mrs", "ms", "no",
      "approx", "ca", "cf", "resp", "ref", "refs", "eq", "st", "inc", "ltd", "jr"};
  std::string lower;
  for (char c : word) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  while (!lower.empty() && (lower.front() == '(' || lower.front() == '[')) lower.erase(0, 1);
  if (lower.size() == 1 && std::isalpha(static_cast<unsigned char>(lower[0]))) return true;
  return std::find(kAbbrev.begin(), kAbbrev.end(), lower) != kAbbrev.end();
}

bool is_closer(char c) { return c == ')' || c == ']' || c == '"' || c == '\''; }

bool starts_sentence(char c) {
  return std::isupper(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '(' || c == '[' || c == '"';
}

}  // namespace

std::vector<SentenceSpan> split_sentences(std::string_view text, std::size_t base) {
  std::vector<SentenceSpan> spans;
  auto emit = [&](std::size_t from, std::size_t to) {
    while (from < to && is_space(text[from])) ++from;
    while (to > from && is_space(text[to - 1])) --to;
    if (to > from) spans.push_back(SentenceSpan{base + from, base + to});
  };
  std::size_t begin = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    std::size_t j = i + 1;
    while (j < text.size() && is_closer(text[j])) ++j;
    if (j < text.size() && !is_space(text[j])) continue;
    std::size_t k = j;
    while (k < text.size() && is_space(text[k])) ++k;
    if (k < text.size() && !starts_sentence(text[k])) continue;
    if (c == '.') {
      std::size_t w = i;
      while (w > begin && !is_space(text[w - 1])) --w;
      if (is_abbreviation(text.substr(w, i - w))) continue;
    }
    emit(begin, j);
    begin = j;
    i = j > 0 ? j - 1 : 0;
  }
  emit(begin, text.size());
  return spans;
}

std::optional<std::size_t> sentence_of(const Mention& mention,
                                       const std::vector<SentenceSpan>& spans) {
  if (mention.sentence_index) return mention.sentence_index;
  if (spans.empty()) return std::nullopt;
  auto it = std::upper_bound(spans.begin(), spans.end(), mention.start,
                             [](std::size_t pos, const SentenceSpan& s) { return pos < s.start; });
  if (it == spans.begin()) return 0;
  return static_cast<std::size_t>(std::prev(it) - spans.begin());
}

void assign_sentence_indices(AnnotatedDocument& doc) {
  for (auto& e : doc.entities) {
    for (auto& m : e.mentions) {
      m.sentence_index.reset();
      m.sentence_index = sentence_of(m, doc.sentence_spans);
    }
  }
}

bool is_intersentence(const AnnotatedDocument& doc, const RelationInstance& relation,
                      IntersentenceDefinition definition) {
  std::vector<std::set<std::size_t>> sentences;
  for (std::size_t idx : relation.entities) {
    auto& s = sentences.emplace_back();
    for (const auto& m : doc.entity(idx).mentions) {
      if (auto sid = sentence_of(m, doc.sentence_spans)) s.insert(*sid);
    }
  }
  if (definition == IntersentenceDefinition::kAllMentions) {
    std::set<std::size_t> all;
    for (const auto& s : sentences) all.insert(s.begin(), s.end());
    return all.size() != 1;
  }
  if (sentences.empty()) return true;
  for (std::size_t sid : sentences.front()) {
    bool shared = std::all_of(sentences.begin() + 1, sentences.end(),
                              [&](const std::set<std::size_t>& s) { return s.count(sid) > 0; });
    if (shared) return false;
  }
  return true;
}

IntersentenceStats intersentence_fraction(const std::vector<AnnotatedDocument>& docs,
                                          IntersentenceDefinition definition) {
  IntersentenceStats stats;
  for (const auto& doc : docs) {
    if (doc.sentence_spans.empty()) {
      ++stats.skipped_documents;
      stats.warnings.push_back("document " + doc.doc_id + " has no sentence spans; skipped");
      continue;
    }
    for (const auto& rel : doc.relations) {
      ++stats.total;
      if (is_intersentence(doc, rel, definition)) ++stats.inter;
    }
  }
  return stats;
}

}  // namespace docre
