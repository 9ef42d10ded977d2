#include "docre/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iterator>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace docre {

MatchCriterion::MatchCriterion(MatchMode mode, double relaxed_threshold)
    : mode_(mode), threshold_(relaxed_threshold) {
  if (!(relaxed_threshold > 0.0 && relaxed_threshold < 1.0)) {
    throw ContractViolation("relaxed threshold must lie in (0, 1), got " +
                            std::to_string(relaxed_threshold));
  }
}

bool entity_match(const ParsedEntity& predicted, const ParsedEntity& gold,
                  const MatchCriterion& criterion) {
  if (predicted.mentions.empty()) {
    throw ContractViolation("entity_match: predicted entity of type " + predicted.entity_type +
                            " has no mentions");
  }
  if (predicted.entity_type != gold.entity_type) return false;
  if (criterion.mode() == MatchMode::kStrict) return predicted.mentions == gold.mentions;

  std::vector<std::string> shared;
  std::set_intersection(predicted.mentions.begin(), predicted.mentions.end(),
                        gold.mentions.begin(), gold.mentions.end(), std::back_inserter(shared));
  const double overlap =
      static_cast<double>(shared.size()) / static_cast<double>(predicted.mentions.size());
  return overlap > criterion.relaxed_threshold();
}

bool relation_match(const ParsedRelation& predicted, const ParsedRelation& gold,
                    const MatchCriterion& criterion) {
  if (predicted.relation_type != gold.relation_type) return false;
  if (predicted.entities.size() != gold.entities.size()) return false;
  for (std::size_t i = 0; i < predicted.entities.size(); ++i) {
    if (!entity_match(predicted.entities[i], gold.entities[i], criterion)) return false;
  }
  return true;
}

RelationMatcher relation_matcher(const MatchCriterion& criterion) {
  return [criterion](const ParsedRelation& p, const ParsedRelation& g) {
    return relation_match(p, g, criterion);
  };
}

RelationDiff diff_relations(const std::vector<ParsedRelation>& predicted,
                            const std::vector<ParsedRelation>& gold,
                            const MatchCriterion& criterion) {
  return diff_relations(predicted, gold, relation_matcher(criterion));
}

double Counts::precision() const {
  return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
}

double Counts::recall() const {
  return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
}

double Counts::f1() const {
  const double p = precision();
  const double r = recall();
  return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

Counts& Counts::operator+=(const Counts& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

namespace {

void check_same_documents(const DocumentRelations& predicted, const DocumentRelations& gold) {
  std::vector<std::string> only_pred;
  std::vector<std::string> only_gold;
  for (const auto& [id, rels] : predicted) {
    if (!gold.count(id)) only_pred.push_back(id);
  }
  for (const auto& [id, rels] : gold) {
    if (!predicted.count(id)) only_gold.push_back(id);
  }
  if (only_pred.empty() && only_gold.empty()) return;
  auto join = [](const std::vector<std::string>& ids) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : ", ") + id;
    return out.empty() ? std::string("none") : out;
  };
  throw Error("document ids differ; only in predictions: " + join(only_pred) +
              "; only in gold: " + join(only_gold));
}

ScoreReport score_document(const std::vector<ParsedRelation>& predicted,
                           const std::vector<ParsedRelation>& gold,
                           const MatchCriterion& criterion) {
  ScoreReport report;
  auto diff = diff_relations(predicted, gold, criterion);
  for (std::size_t p : diff.true_positives) ++report.per_type[predicted[p].relation_type].tp;
  for (std::size_t p : diff.false_positives) ++report.per_type[predicted[p].relation_type].fp;
  for (std::size_t g : diff.false_negatives) ++report.per_type[gold[g].relation_type].fn;
  report.overall = Counts{diff.tp(), diff.fp(), diff.fn()};
  return report;
}

void merge_into(ScoreReport& total, const ScoreReport& part) {
  total.overall += part.overall;
  for (const auto& [type, counts] : part.per_type) total.per_type[type] += counts;
}

}  // namespace

ScoreReport score(const DocumentRelations& predicted, const DocumentRelations& gold,
                  const MatchCriterion& criterion, std::size_t jobs) {
  check_same_documents(predicted, gold);
  std::vector<const std::string*> ids;
  ids.reserve(gold.size());
  for (const auto& [id, rels] : gold) ids.push_back(&id);

  jobs = std::max<std::size_t>(1, std::min(jobs, ids.size()));
  std::vector<ScoreReport> partial(jobs);
  auto worker = [&](std::size_t w) {
    for (std::size_t i = w; i < ids.size(); i += jobs) {
      merge_into(partial[w], score_document(predicted.at(*ids[i]), gold.at(*ids[i]), criterion));
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < jobs; ++w) threads.emplace_back(worker, w);
    for (auto& t : threads) t.join();
  }
  ScoreReport total;
  for (const auto& part : partial) merge_into(total, part);
  return total;
}

void Hierarchy::add_edge(const std::string& child, const std::string& parent) {
  parents_[child].insert(parent);
}

void Hierarchy::add_name(const std::string& id, const std::string& mention) {
  names_[mention].insert(id);
}

std::size_t Hierarchy::edge_count() const {
  std::size_t n = 0;
  for (const auto& [child, parents] : parents_) n += parents.size();
  return n;
}

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

template <typename Fn>
void read_two_columns(std::istream& in, const char* what, Fn&& on_row) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw FormatError(std::string(what) + " expects two tab-separated columns", line_no);
    }
    on_row(fields[0], fields[1]);
  }
}

}  // namespace

Hierarchy Hierarchy::load(std::istream& edges, std::istream* lexicon, const SchemaConfig& config) {
  Hierarchy h;
  read_two_columns(edges, "hierarchy edge file",
                   [&](const std::string& child, const std::string& parent) {
                     h.add_edge(child, parent);
                   });
  if (lexicon != nullptr) {
    read_two_columns(*lexicon, "hierarchy lexicon",
                     [&](const std::string& id, const std::string& name) {
                       h.add_name(id, normalize_mention_text(name, config));
                     });
  }
  h.check_acyclic();
  return h;
}

void Hierarchy::check_acyclic() const {
  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> marks;
  std::function<void(const std::string&)> visit = [&](const std::string& node) {
    auto& mark = marks[node];
    if (mark == Mark::kDone) return;
    if (mark == Mark::kActive) throw FormatError("hierarchy contains a cycle through " + node);
    mark = Mark::kActive;
    auto it = parents_.find(node);
    if (it != parents_.end()) {
      for (const auto& parent : it->second) visit(parent);
    }
    marks[node] = Mark::kDone;
  };
  for (const auto& [child, parents] : parents_) visit(child);
}

std::set<std::string> Hierarchy::ids_of(const std::string& mention) const {
  auto it = names_.find(mention);
  return it == names_.end() ? std::set<std::string>{} : it->second;
}

std::set<std::string> Hierarchy::ids_of(const ParsedEntity& entity) const {
  std::set<std::string> ids;
  for (const auto& m : entity.mentions) {
    auto found = ids_of(m);
    ids.insert(found.begin(), found.end());
  }
  return ids;
}

std::set<std::string> Hierarchy::ancestors(const std::string& id) const {
  std::set<std::string> seen;
  std::vector<std::string> stack{id};
  while (!stack.empty()) {
    auto node = std::move(stack.back());
    stack.pop_back();
    auto it = parents_.find(node);
    if (it == parents_.end()) continue;
    for (const auto& parent : it->second) {
      if (seen.insert(parent).second) stack.push_back(parent);
    }
  }
  return seen;
}

bool Hierarchy::is_strict_ancestor(const std::string& ancestor,
                                   const std::string& descendant) const {
  return ancestor != descendant && ancestors(descendant).count(ancestor) > 0;
}

namespace {

bool is_hypernym_of_gold(const ParsedRelation& pred, const ParsedRelation& gold,
                         const Hierarchy& hierarchy, const MatchCriterion& criterion) {
  if (pred.relation_type != gold.relation_type) return false;
  if (pred.entities.size() != gold.entities.size() || pred.entities.empty()) return false;
  const std::size_t tail = pred.entities.size() - 1;
  for (std::size_t i = 0; i < tail; ++i) {
    if (!entity_match(pred.entities[i], gold.entities[i], criterion)) return false;
  }
  if (pred.entities[tail].entity_type != gold.entities[tail].entity_type) return false;
  auto pred_ids = hierarchy.ids_of(pred.entities[tail]);
  auto gold_ids = hierarchy.ids_of(gold.entities[tail]);
  for (const auto& g : gold_ids) {
    auto up = hierarchy.ancestors(g);
    for (const auto& p : pred_ids) {
      if (p != g && up.count(p)) return true;
    }
  }
  return false;
}

}  // namespace

DocumentRelations filter_hypernyms(const DocumentRelations& predicted,
                                   const DocumentRelations& gold, const Hierarchy& hierarchy,
                                   const MatchCriterion& criterion) {
  DocumentRelations out;
  static const std::vector<ParsedRelation> kNone;
  for (const auto& [doc_id, preds] : predicted) {
    auto git = gold.find(doc_id);
    const auto& golds = git == gold.end() ? kNone : git->second;
    auto diff = diff_relations(preds, golds, criterion);
    auto& kept = out[doc_id];
    for (std::size_t p = 0; p < preds.size(); ++p) {
      bool drop = false;
      if (diff.assignment[p] < 0) {
        drop = std::any_of(golds.begin(), golds.end(), [&](const ParsedRelation& g) {
          return is_hypernym_of_gold(preds[p], g, hierarchy, criterion);
        });
      }
      if (!drop) kept.push_back(preds[p]);
    }
  }
  return out;
}

namespace {

std::string fmt_ratio(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void table_row(std::ostringstream& out, const std::string& label, const Counts& c) {
  out << std::left << std::setw(16) << label << std::right << std::setw(8) << c.tp
      << std::setw(8) << c.fp << std::setw(8) << c.fn << std::setw(11) << fmt_ratio(c.precision())
      << std::setw(11) << fmt_ratio(c.recall()) << std::setw(11) << fmt_ratio(c.f1()) << '\n';
}

nlohmann::json counts_json(const Counts& c) {
  return {{"tp", c.tp},           {"fp", c.fp},     {"fn", c.fn},
          {"precision", c.precision()}, {"recall", c.recall()}, {"f1", c.f1()}};
}

}  // namespace

std::string format_report_table(const ScoreReport& report, bool per_type) {
  std::ostringstream out;
  out << std::left << std::setw(16) << "type" << std::right << std::setw(8) << "tp"
      << std::setw(8) << "fp" << std::setw(8) << "fn" << std::setw(11) << "precision"
      << std::setw(11) << "recall" << std::setw(11) << "f1" << '\n';
  if (per_type) {
    for (const auto& [type, counts] : report.per_type) table_row(out, type, counts);
  }
  table_row(out, "micro", report.overall);
  return out.str();
}

std::string report_to_json(const ScoreReport& report, const MatchCriterion& criterion) {
  nlohmann::json j;
  j["criterion"] = criterion.mode() == MatchMode::kStrict ? "strict" : "relaxed";
  if (criterion.mode() == MatchMode::kRelaxed) j["threshold"] = criterion.relaxed_threshold();
  j["micro"] = counts_json(report.overall);
  j["per_type"] = nlohmann::json::object();
  for (const auto& [type, counts] : report.per_type) j["per_type"][type] = counts_json(counts);
  return j.dump();
}

}  // namespace docre
