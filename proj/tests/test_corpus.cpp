#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "docre/corpus.hpp"
#include "docre/linearizer.hpp"
#include "docre/parser.hpp"
#include "docre/schema_file.hpp"

using namespace docre;

namespace {

std::string fixture(const std::string& name) { return std::string(DOCRE_FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CorpusReadResult read_fixture(const std::string& name) {
  std::ifstream in(fixture(name));
  REQUIRE(in);
  return read_pubtator(in);
}

const Entity& entity_with_id(const AnnotatedDocument& doc, const std::string& id) {
  auto it = std::find_if(doc.entities.begin(), doc.entities.end(),
                         [&](const Entity& e) { return e.id == id; });
  REQUIRE(it != doc.entities.end());
  return *it;
}

SchemaConfig cdr_schema() { return load_schema(std::string(DOCRE_SCHEMA_DIR) + "/cdr.schema"); }

}  // namespace

TEST_CASE("reads the carbamazepine abstract") {
  auto result = read_fixture("cdr_1728915.pubtator");
  CHECK(result.warnings.empty());
  REQUIRE(result.documents.size() == 1);
  const auto& doc = result.documents[0];
  CHECK(doc.doc_id == "1728915");
  CHECK(doc.title_length == 42u);
  CHECK(doc.text.substr(0, 13) == "Carbamazepine");
  CHECK(doc.entities.size() == 4);
  CHECK(entity_with_id(doc, "D002220").mentions.size() == 2);
  CHECK(entity_with_id(doc, "D002220").entity_type == "Chemical");
  CHECK(doc.relations.size() == 2);
  CHECK(doc.sentence_spans.size() == 2);
  CHECK(serialize_relations(doc, cdr_schema()) ==
        "carbamazepine @CHEMICAL@ bradycardia @DISEASE@ @CID@ "
        "carbamazepine @CHEMICAL@ atrioventricular block @DISEASE@ @CID@");
}

TEST_CASE("composite identifiers attach one mention to several entities") {
  auto result = read_fixture("composite.pubtator");
  REQUIRE(result.documents.size() == 1);
  const auto& doc = result.documents[0];
  const auto& bladder = entity_with_id(doc, "D001749");
  const auto& liver = entity_with_id(doc, "D008113");
  CHECK(bladder.mentions.size() == 1);
  CHECK(liver.mentions.size() == 1);
  CHECK(bladder.mentions[0].text == "bladder and liver tumours");
  CHECK(doc.relations.size() == 2);
}

TEST_CASE("ternary relation lines") {
  auto result = read_fixture("dgm_sample.pubtator");
  REQUIRE(result.documents.size() == 1);
  const auto& doc = result.documents[0];
  REQUIRE(doc.relations.size() == 1);
  CHECK(doc.relations[0].entities.size() == 3);
  CHECK(doc.entity(doc.relations[0].entities[2]).id == "p.L858E");
  auto config = load_schema(std::string(DOCRE_SCHEMA_DIR) + "/dgm.schema");
  CHECK(serialize_relations(doc, config) == "gefitinib @DRUG@ egfr @GENE@ l858e @MUTATION@ @DGM@");
}

TEST_CASE("writer reproduces fixtures") {
  for (const char* name : {"cdr_1728915.pubtator", "composite.pubtator", "dgm_sample.pubtator",
                           "two_sentence.pubtator"}) {
    auto result = read_fixture(name);
    std::ostringstream out;
    for (const auto& doc : result.documents) write_pubtator(doc, out);
    std::string expected = slurp(fixture(name));
    if (!expected.ends_with("\n\n")) expected += "\n";
    CHECK_MESSAGE(out.str() == expected, name);
  }
}

TEST_CASE("annotation line order does not change the document") {
  const std::string original = slurp(fixture("cdr_1728915.pubtator"));
  std::vector<std::string> lines;
  std::istringstream split(original);
  for (std::string l; std::getline(split, l);) lines.push_back(l);
  std::mt19937 rng(3);
  std::istringstream a(original);
  auto reference = read_pubtator(a).documents.at(0);
  for (int i = 0; i < 20; ++i) {
    std::shuffle(lines.begin() + 2, lines.begin() + 7, rng);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    std::istringstream in(text);
    auto doc = read_pubtator(in).documents.at(0);
    std::ostringstream x, y;
    write_pubtator(doc, x);
    write_pubtator(reference, y);
    CHECK(x.str() == y.str());
  }
}

TEST_CASE("reader warnings and errors") {
  SUBCASE("text disagreeing with offsets") {
    std::istringstream in("1|t|Aspirin works.\n1|a|Yes.\n1\t0\t7\tAspirn\tChemical\tD1\n\n");
    auto result = read_pubtator(in);
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("line 3") != std::string::npos);
    CHECK(result.documents[0].entities[0].mentions[0].text == "Aspirin");
  }
  SUBCASE("relation naming an unannotated id") {
    std::istringstream in("1|t|Aspirin works.\n1|a|Yes.\n1\t0\t7\tAspirin\tChemical\tD1\n1\tCID\tD1\tD9\n");
    auto result = read_pubtator(in);
    CHECK(result.documents[0].relations.empty());
    REQUIRE(result.warnings.size() == 1);
    CHECK(result.warnings[0].find("D9") != std::string::npos);
  }
  SUBCASE("anonymous identifiers give separate entities") {
    std::istringstream in("1|t|Pain and pain.\n1|a|x\n1\t0\t4\tPain\tDisease\t-1\n1\t9\t13\tpain\tDisease\t-1\n");
    auto result = read_pubtator(in);
    CHECK(result.documents[0].entities.size() == 2);
  }
  SUBCASE("offsets outside the text") {
    std::istringstream in("1|t|Short.\n1|a|x\n1\t0\t70\tShort\tDisease\tD1\n");
    try {
      read_pubtator(in);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("missing abstract line") {
    std::istringstream in("1|t|Short.\n1\t0\t5\tShort\tDisease\tD1\n");
    CHECK_THROWS_AS(read_pubtator(in), FormatError);
  }
  SUBCASE("documents without blank separators") {
    std::istringstream in("1|t|A.\n1|a|B.\n2|t|C.\n2|a|D.\n");
    auto result = read_pubtator(in);
    REQUIRE(result.documents.size() == 2);
    CHECK(result.documents[1].doc_id == "2");
  }
}

TEST_CASE("sentence splitting") {
  auto spans = split_sentences("First one. Second, e.g. with Dr. Who. Third (x). 4 more? (Yes) end");
  REQUIRE(spans.size() == 5);
  CHECK(spans[0].start == 0);
  CHECK(spans[0].end == 10);
  CHECK(spans[1].start == 11);
  CHECK(split_sentences("a.b c. d").size() == 1);
  CHECK(split_sentences("   ").empty());
  auto shifted = split_sentences("One. Two.", 100);
  REQUIRE(shifted.size() == 2);
  CHECK(shifted[1].start == 105);
  CHECK(shifted[1].end == 109);
}

TEST_CASE("intersentence fraction on PubTator fixtures") {
  auto result = read_fixture("two_sentence.pubtator");
  REQUIRE(result.documents.size() == 2);
  auto any = intersentence_fraction(result.documents, IntersentenceDefinition::kAnySentence);
  CHECK(any.total == 2);
  CHECK(any.inter == 1);
  auto all = intersentence_fraction(result.documents, IntersentenceDefinition::kAllMentions);
  CHECK(all.inter == 2);

  auto cdr = read_fixture("cdr_1728915.pubtator");
  auto cdr_any = intersentence_fraction(cdr.documents, IntersentenceDefinition::kAnySentence);
  CHECK(cdr_any.inter == 0);
  CHECK(cdr_any.total == 2);
}

TEST_CASE("documents without sentence spans are skipped") {
  AnnotatedDocument doc;
  doc.doc_id = "bare";
  doc.entities = {Entity{{Mention("a", 0, 1)}, "X", ""}, Entity{{Mention("b", 2, 3)}, "X", ""}};
  doc.relations = {RelationInstance{{0, 1}, "R"}};
  auto stats = intersentence_fraction({doc}, IntersentenceDefinition::kAnySentence);
  CHECK(stats.skipped_documents == 1);
  CHECK(stats.total == 0);
  CHECK(stats.fraction() == 0.0);
  CHECK(stats.warnings.size() == 1);
}

TEST_CASE("DocRED records") {
  std::ifstream in(fixture("docred_sample.json"));
  auto result = read_docred(in);
  REQUIRE(result.documents.size() == 2);
  const auto& doc = result.documents[0];
  CHECK(doc.doc_id == "Sample One");
  CHECK(doc.text == "Alice Smith was born in Paris . She moved to Berlin in 1990 .");
  CHECK(doc.sentence_spans.size() == 2);
  CHECK(doc.entities.size() == 4);
  CHECK(doc.entities[0].entity_type == "PER");
  CHECK(doc.entities[0].mentions[1].text == "She");
  CHECK(doc.entities[0].mentions[1].sentence_index == 1u);
  CHECK(doc.entities[2].mentions[0].text == "Berlin");
  CHECK(doc.relations.size() == 2);
  CHECK(result.documents[1].relations.empty());

  auto any = intersentence_fraction(result.documents, IntersentenceDefinition::kAnySentence);
  CHECK(any.inter == 0);
  CHECK(any.total == 2);
  auto all = intersentence_fraction(result.documents, IntersentenceDefinition::kAllMentions);
  CHECK(all.inter == 2);

}

TEST_CASE("DocRED records one per line") {
  const std::string line =
      R"({"title": "T", "sents": [["A", "b", "."], ["C", "."]], "vertexSet": [[{"name": "A", "pos": [0, 1], "sent_id": 0, "type": "X"}], [{"name": "C", "pos": [0, 1], "sent_id": 1, "type": "Y"}]], "labels": [{"h": 0, "t": 1, "r": "P1"}]})";
  std::istringstream in(line + "\n\n" + line + "\n");
  auto result = read_docred(in);
  REQUIRE(result.documents.size() == 2);
  CHECK(result.documents[0].entities[1].mentions[0].start == 6);
  CHECK(is_intersentence(result.documents[0], result.documents[0].relations[0],
                         IntersentenceDefinition::kAnySentence));
}

TEST_CASE("DocRED errors") {
  CHECK_THROWS_AS(docred_record_to_document(R"({"title": "T"})", 0), FormatError);
  CHECK_THROWS_AS(docred_record_to_document("not json", 0), FormatError);
  CHECK_THROWS_AS(
      docred_record_to_document(
          R"({"sents": [["A"]], "vertexSet": [[{"pos": [0, 1], "sent_id": 0, "type": "X"}]], "labels": [{"h": 0, "t": 3, "r": "P"}]})",
          0),
      FormatError);
  CHECK_THROWS_AS(
      docred_record_to_document(R"({"sents": [["A"]], "vertexSet": [[{"pos": [0, 4], "sent_id": 0}]]})", 0),
      FormatError);
}
