#include "docre/cli.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "docre/constraints.hpp"
#include "docre/corpus.hpp"
#include "docre/evaluation.hpp"
#include "docre/hinting.hpp"
#include "docre/linearizer.hpp"
#include "docre/parser.hpp"
#include "docre/records.hpp"
#include "docre/schema_file.hpp"

namespace docre {

namespace {

enum class CorpusFormat { kAuto, kPubtator, kDocred, kRecords };

const std::map<std::string, CorpusFormat> kFormatNames{{"auto", CorpusFormat::kAuto},
                                                       {"pubtator", CorpusFormat::kPubtator},
                                                       {"docred", CorpusFormat::kDocred},
                                                       {"records", CorpusFormat::kRecords}};

struct Options {
  std::string schema_path;
  std::string format = "auto";
  std::string output;
  std::size_t jobs = 1;
  bool plain = false;

  std::string input;
  std::string pred;
  std::string gold;
  std::string criterion = "strict";
  double threshold = 0.5;
  std::string hierarchy;
  std::string lexicon;
  bool per_type = false;
  std::string definition = "any-sentence";
  std::string annotations;
};

// Owns an input stream for a path. Standard input ("-") is buffered in
// memory so that its head can be sniffed and rewound like a file.
class Input {
 public:
  Input(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") {
      auto buffer = std::make_unique<std::stringstream>();
      *buffer << stdin_stream.rdbuf();
      stream_ = std::move(buffer);
      return;
    }
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) throw Error("cannot open input " + path);
    stream_ = std::move(file);
  }
  std::istream& get() { return *stream_; }

  // First non-blank line; the stream is rewound afterwards.
  std::string first_content_line() {
    std::string line;
    std::string first;
    while (std::getline(*stream_, line)) {
      if (!std::all_of(line.begin(), line.end(), is_space)) {
        first = line;
        break;
      }
    }
    stream_->clear();
    stream_->seekg(0);
    return first;
  }

 private:
  std::unique_ptr<std::istream> stream_;
};

class Output {
 public:
  Output(const std::string& path, std::ostream& stdout_stream) {
    if (path.empty() || path == "-") {
      stream_ = &stdout_stream;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot open output " + path);
    stream_ = file_.get();
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string lowercase_extension(const std::string& path) {
  auto dot = path.find_last_of('.');
  auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext;
}

CorpusFormat detect_format(const std::string& path, const std::string& flag, Input& in) {
  auto named = kFormatNames.at(flag);
  if (named != CorpusFormat::kAuto) return named;
  const auto ext = lowercase_extension(path);
  if (ext == "pubtator") return CorpusFormat::kPubtator;
  if (ext == "json") return CorpusFormat::kDocred;
  auto first = in.first_content_line();
  auto pos = first.find_first_not_of(" \t");
  if (pos != std::string::npos && first[pos] == '[') return CorpusFormat::kDocred;
  if (pos != std::string::npos && first[pos] == '{') {
    return first.find("\"vertexSet\"") != std::string::npos ? CorpusFormat::kDocred
                                                            : CorpusFormat::kRecords;
  }
  if (ext == "jsonl") return CorpusFormat::kRecords;
  return CorpusFormat::kPubtator;
}

// Pull-style document stream over any supported corpus format.
class DocumentSource {
 public:
  DocumentSource(const std::string& path, const std::string& format_flag, std::istream& stdin_stream,
                 std::ostream& err)
      : input_(path, stdin_stream), err_(err) {
    format_ = detect_format(path, format_flag, input_);
    if (format_ == CorpusFormat::kPubtator) {
      pubtator_.emplace(input_.get());
    } else if (format_ == CorpusFormat::kDocred) {
      auto result = read_docred(input_.get());
      buffered_ = std::move(result.documents);
    }
  }

  std::optional<AnnotatedDocument> next() {
    switch (format_) {
      case CorpusFormat::kPubtator: {
        auto doc = pubtator_->next();
        flush_warnings();
        return doc;
      }
      case CorpusFormat::kDocred:
        if (cursor_ >= buffered_.size()) return std::nullopt;
        return std::move(buffered_[cursor_++]);
      default: {
        std::string line;
        while (std::getline(input_.get(), line)) {
          ++line_no_;
          if (std::all_of(line.begin(), line.end(), is_space)) continue;
          return document_from_record(line, line_no_);
        }
        return std::nullopt;
      }
    }
  }

 private:
  void flush_warnings() {
    const auto& w = pubtator_->warnings();
    for (; warned_ < w.size(); ++warned_) err_ << "warning: " << w[warned_] << '\n';
  }

  Input input_;
  std::ostream& err_;
  CorpusFormat format_ = CorpusFormat::kAuto;
  std::optional<PubtatorReader> pubtator_;
  std::vector<AnnotatedDocument> buffered_;
  std::size_t cursor_ = 0;
  std::size_t line_no_ = 0;
  std::size_t warned_ = 0;
};

// Applies `fn` to batches of items on `jobs` threads and emits results in
// input order.
template <typename Item, typename Result>
void ordered_map(const std::function<std::optional<Item>()>& next,
                 const std::function<Result(const Item&)>& fn,
                 const std::function<void(const Result&)>& sink, std::size_t jobs) {
  jobs = std::max<std::size_t>(1, jobs);
  const std::size_t batch_size = jobs == 1 ? 1 : jobs * 32;
  while (true) {
    std::vector<Item> batch;
    while (batch.size() < batch_size) {
      auto item = next();
      if (!item) break;
      batch.push_back(std::move(*item));
    }
    if (batch.empty()) return;
    std::vector<std::optional<Result>> results(batch.size());
    std::vector<std::exception_ptr> errors(jobs);
    auto work = [&](std::size_t w) {
      try {
        for (std::size_t i = w; i < batch.size(); i += jobs) results[i] = fn(batch[i]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    };
    if (jobs == 1 || batch.size() == 1) {
      for (std::size_t w = 0; w < jobs; ++w) work(w);
    } else {
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < jobs; ++w) threads.emplace_back(work, w);
      for (auto& t : threads) t.join();
    }
    for (std::size_t i = 0; i < batch.size(); ++i) {
      if (!results[i]) {
        for (const auto& e : errors) {
          if (e) std::rethrow_exception(e);
        }
      }
      sink(*results[i]);
    }
  }
}

SchemaConfig require_schema(const Options& opt) {
  if (opt.schema_path.empty()) throw Error("--schema is required for this command");
  return load_schema(opt.schema_path);
}

SchemaConfig schema_or_default(const Options& opt) {
  if (!opt.schema_path.empty()) return load_schema(opt.schema_path);
  return SchemaConfig(SchemaConfig::Definition{});
}

// "doc_id<TAB>target" or a bare target, whose id is then its 0-based line index.
std::pair<std::string, std::string> split_target_line(const std::string& line, std::size_t index) {
  auto tab = line.find('\t');
  if (tab == std::string::npos) return {std::to_string(index), line};
  return {line.substr(0, tab), line.substr(tab + 1)};
}

int cmd_linearize(const Options& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto schema = require_schema(opt);
  DocumentSource source(opt.input, opt.format, in, err);
  Output output(opt.output, out);
  ordered_map<AnnotatedDocument, std::string>(
      [&] { return source.next(); },
      [&](const AnnotatedDocument& doc) {
        auto target = serialize_relations(doc, schema);
        return opt.plain ? target : doc.doc_id + '\t' + target;
      },
      [&](const std::string& line) { output.get() << line << '\n'; }, opt.jobs);
  return 0;
}

int cmd_parse(const Options& opt, std::istream& in, std::ostream& out, std::ostream&) {
  const auto schema = require_schema(opt);
  Input input(opt.input, in);
  Output output(opt.output, out);
  std::size_t index = 0;
  std::function<std::optional<std::pair<std::string, std::string>>()> next = [&]() {
    std::string line;
    if (!std::getline(input.get(), line)) return std::optional<std::pair<std::string, std::string>>{};
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return std::optional(split_target_line(line, index++));
  };
  ordered_map<std::pair<std::string, std::string>, std::string>(
      next,
      [&](const std::pair<std::string, std::string>& item) {
        return parsed_to_record(ParsedDocument{item.first, parse_target_string(item.second, schema)});
      },
      [&](const std::string& line) { output.get() << line << '\n'; }, opt.jobs);
  return 0;
}

int cmd_validate(const Options& opt, std::istream& in, std::ostream& out, std::ostream&) {
  const auto schema = require_schema(opt);
  Input input(opt.input, in);
  Output output(opt.output, out);
  std::size_t total = 0;
  std::size_t valid = 0;
  std::string line;
  while (std::getline(input.get(), line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto [doc_id, target] = split_target_line(line, total);
    const bool ok = validate_sequence(classify_tokens(target, schema), schema);
    ++total;
    if (ok) ++valid;
    output.get() << doc_id << '\t' << (ok ? "valid" : "invalid") << '\n';
  }
  const double pct = total == 0 ? 100.0 : 100.0 * static_cast<double>(valid) / static_cast<double>(total);
  output.get() << "# valid " << valid << '/' << total << " (" << std::fixed << std::setprecision(2)
               << pct << "%)\n";
  return 0;
}

int cmd_hint(const Options& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto schema = require_schema(opt);
  std::map<std::string, std::vector<Entity>> silver;
  const bool use_silver = !opt.annotations.empty();
  if (use_silver) {
    Input ann(opt.annotations, in);
    auto result = read_pubtator(ann.get());
    for (const auto& w : result.warnings) err << "warning: " << w << '\n';
    for (auto& doc : result.documents) {
      doc.relations.clear();
      silver[doc.doc_id] = hint_entities(doc);
    }
  }
  DocumentSource source(opt.input, opt.format, in, err);
  Output output(opt.output, out);
  ordered_map<AnnotatedDocument, std::string>(
      [&] { return source.next(); },
      [&](const AnnotatedDocument& doc) {
        std::string hinted;
        if (use_silver) {
          auto it = silver.find(doc.doc_id);
          static const std::vector<Entity> kNone;
          hinted = build_hint(it == silver.end() ? kNone : it->second, doc.text, schema);
        } else {
          hinted = build_document_hint(doc, schema);
        }
        return opt.plain ? hinted : doc.doc_id + '\t' + hinted;
      },
      [&](const std::string& line) { output.get() << line << '\n'; }, opt.jobs);
  return 0;
}

int cmd_stats(const Options& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  IntersentenceDefinition definition;
  if (opt.definition == "any-sentence") {
    definition = IntersentenceDefinition::kAnySentence;
  } else if (opt.definition == "all-mentions") {
    definition = IntersentenceDefinition::kAllMentions;
  } else {
    throw Error("unknown --definition '" + opt.definition + "'");
  }
  DocumentSource source(opt.input, opt.format, in, err);
  IntersentenceStats total;
  std::size_t documents = 0;
  while (auto doc = source.next()) {
    ++documents;
    auto s = intersentence_fraction({*doc}, definition);
    total.inter += s.inter;
    total.total += s.total;
    total.skipped_documents += s.skipped_documents;
    for (const auto& w : s.warnings) err << "warning: " << w << '\n';
  }
  Output output(opt.output, out);
  output.get() << total.fraction() << '\n';
  err << "documents " << documents << ", relations " << total.total << ", inter-sentence "
      << total.inter << ", skipped " << total.skipped_documents << '\n';
  return 0;
}

// Relations per document from any input kind: corpora (gold relations),
// document or parsed-relation records, or target-string lines. Entity ids of
// corpus inputs are added to `lexicon` when given.
DocumentRelations load_relations(const std::string& path, const std::string& format_flag,
                                 const SchemaConfig& schema, std::istream& in, std::ostream& err,
                                 Hierarchy* lexicon) {
  DocumentRelations out;
  auto add_corpus = [&](DocumentSource& source) {
    while (auto doc = source.next()) {
      out[doc->doc_id] = to_parsed_relations(*doc, schema);
      if (lexicon == nullptr) continue;
      for (const auto& e : doc->entities) {
        if (e.id.empty() || e.id == "-1") continue;
        for (const auto& m : e.mentions) lexicon->add_name(e.id, normalize_mention_text(m.text, schema));
      }
    }
  };

  if (format_flag != "auto") {
    DocumentSource source(path, format_flag, in, err);
    add_corpus(source);
    return out;
  }

  Input input(path, in);
  const auto ext = lowercase_extension(path);
  const std::string first = input.first_content_line();
  const auto pos = first.find_first_not_of(" \t");
  const char lead = pos == std::string::npos ? '\0' : first[pos];
  const bool pubtator_head =
      first.find("|t|") != std::string::npos && first.find('\t') == std::string::npos;
  const bool docred = ext == "json" || lead == '[' ||
                      (lead == '{' && first.find("\"vertexSet\"") != std::string::npos);
  if (docred || ext == "pubtator" || pubtator_head ||
      (lead == '{' && record_kind(first) == RecordKind::kDocument)) {
    const char* format = docred ? "docred" : lead == '{' ? "records" : "pubtator";
    DocumentSource source(path, format, in, err);
    add_corpus(source);
    return out;
  }

  if (lead != '{' && lead != '\0' && schema.relation_types().empty()) {
    throw Error("target strings in " + path + " need --schema to be parsed");
  }
  std::string line;
  std::size_t index = 0;
  std::size_t line_no = 0;
  while (std::getline(input.get(), line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lead == '{') {
      if (std::all_of(line.begin(), line.end(), is_space)) continue;
      auto parsed = parsed_from_record(line, line_no);
      out[parsed.doc_id] = dedupe_relations(std::move(parsed.relations));
    } else {
      auto [doc_id, target] = split_target_line(line, index++);
      out[doc_id] = parse_target_string(target, schema);
    }
  }
  return out;
}

int cmd_score(const Options& opt, std::istream& in, std::ostream& out, std::ostream& err) {
  const auto schema = schema_or_default(opt);
  const MatchCriterion criterion = opt.criterion == "relaxed"
                                       ? MatchCriterion::relaxed(opt.threshold)
                                       : MatchCriterion::strict();

  std::optional<Hierarchy> hierarchy;
  if (!opt.hierarchy.empty()) {
    std::ifstream edges(opt.hierarchy);
    if (!edges) throw Error("cannot open hierarchy " + opt.hierarchy);
    std::ifstream lexicon;
    if (!opt.lexicon.empty()) {
      lexicon.open(opt.lexicon);
      if (!lexicon) throw Error("cannot open lexicon " + opt.lexicon);
    }
    hierarchy = Hierarchy::load(edges, opt.lexicon.empty() ? nullptr : &lexicon, schema);
  }

  auto predicted = load_relations(opt.pred, "auto", schema, in, err, nullptr);
  auto gold = load_relations(opt.gold, opt.format, schema, in, err,
                             hierarchy ? &*hierarchy : nullptr);
  if (hierarchy) predicted = filter_hypernyms(predicted, gold, *hierarchy, criterion);

  auto report = score(predicted, gold, criterion, opt.jobs);
  Output output(opt.output, out);
  output.get() << format_report_table(report, opt.per_type);
  output.get() << report_to_json(report, criterion) << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Document-level relation extraction toolkit: linearize, parse, validate, hint, "
               "score, stats"};
  app.name("docre");
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--schema", opt.schema_path, "Schema config file")->check(CLI::ExistingFile);
    sub->add_option("--output,-o", opt.output, "Output path (default stdout)");
    sub->add_option("--jobs,-j", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", opt.format, "Corpus format")
        ->check(CLI::IsMember({"auto", "pubtator", "docred", "records"}));
  };

  auto* linearize = app.add_subcommand("linearize", "Write one target string per document");
  add_common(linearize);
  add_format(linearize);
  linearize->add_option("input", opt.input, "Corpus path or -")->required();
  linearize->add_flag("--plain", opt.plain, "Omit the leading doc_id column");

  auto* parse = app.add_subcommand("parse", "Parse target strings into relation records");
  add_common(parse);
  parse->add_option("input", opt.input, "Target strings, one per line, or -")->required();

  auto* validate = app.add_subcommand("validate", "Check target strings against the automaton");
  add_common(validate);
  validate->add_option("input", opt.input, "Target strings, one per line, or -")->required();

  auto* hint = app.add_subcommand("hint", "Write entity-hinted source text per document");
  add_common(hint);
  add_format(hint);
  hint->add_option("input", opt.input, "Corpus path or -")->required();
  hint->add_option("--annotations", opt.annotations,
                   "PubTator file with entity annotations to hint instead of gold")
      ->check(CLI::ExistingFile);
  hint->add_flag("--plain", opt.plain, "Omit the leading doc_id column");

  auto* score_cmd = app.add_subcommand("score", "Micro precision/recall/F1 of predictions");
  add_common(score_cmd);
  add_format(score_cmd);
  score_cmd->add_option("--pred", opt.pred, "Predictions: target strings or records")->required();
  score_cmd->add_option("--gold", opt.gold, "Gold: corpus, records or target strings")->required();
  score_cmd->add_option("--criterion", opt.criterion, "strict or relaxed")
      ->check(CLI::IsMember({"strict", "relaxed"}));
  score_cmd->add_option("--threshold", opt.threshold, "Relaxed overlap threshold (exclusive)");
  score_cmd->add_option("--hierarchy", opt.hierarchy, "child<TAB>parent edge file")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--lexicon", opt.lexicon, "id<TAB>mention file for the hierarchy")
      ->check(CLI::ExistingFile);
  score_cmd->add_flag("--per-type", opt.per_type, "Break scores down by relation type");

  auto* stats = app.add_subcommand("stats", "Fraction of inter-sentence relations");
  add_common(stats);
  add_format(stats);
  stats->add_option("input", opt.input, "Corpus path or -")->required();
  stats->add_option("--definition", opt.definition, "any-sentence or all-mentions")
      ->check(CLI::IsMember({"any-sentence", "all-mentions"}));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*linearize) return cmd_linearize(opt, in, out, err);
    if (*parse) return cmd_parse(opt, in, out, err);
    if (*validate) return cmd_validate(opt, in, out, err);
    if (*hint) return cmd_hint(opt, in, out, err);
    if (*score_cmd) return cmd_score(opt, in, out, err);
    if (*stats) return cmd_stats(opt, in, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace docre
