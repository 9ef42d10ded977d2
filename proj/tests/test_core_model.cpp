#include <random>
#include <sstream>

#include "doctest.h"
#include "docre/model.hpp"
#include "docre/records.hpp"
#include "docre/schema_file.hpp"
#include "support/generators.hpp"
#include "support/worked_examples.hpp"

using namespace docre;

namespace {

SchemaConfig schema_with_fold(bool fold) {
  SchemaConfig::Definition def;
  def.entity_types = {{"GENE", "@GENE@"}};
  def.relation_types = {{"GDA", {"@GDA@", 2}}};
  def.case_fold = fold;
  return SchemaConfig(def);
}

}  // namespace

TEST_CASE("normalize_mention_text examples") {
  CHECK(normalize_mention_text("  ESR1 ", schema_with_fold(true)) == "esr1");
  CHECK(normalize_mention_text("breast  cancer", schema_with_fold(false)) == "breast cancer");
  CHECK(normalize_mention_text("pd", schema_with_fold(true)) == "pd");
  CHECK(normalize_mention_text(" \t\n ", schema_with_fold(true)).empty());
  CHECK(normalize_mention_text("HER2\tand\n neu", schema_with_fold(false)) == "HER2 and neu");
}

TEST_CASE("normalize_mention_text is idempotent") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> byte(0, 255);
  std::uniform_int_distribution<int> len(0, 40);
  for (bool fold : {true, false}) {
    const auto config = schema_with_fold(fold);
    for (int i = 0; i < 2000; ++i) {
      std::string s;
      const int n = len(rng);
      for (int k = 0; k < n; ++k) {
        // Bias towards whitespace and letters.
        const int pick = byte(rng);
        s.push_back(pick < 60 ? " \t\n\r"[pick % 4] : pick < 160 ? static_cast<char>('A' + pick % 26)
                                                                  : static_cast<char>(pick));
      }
      const auto once = normalize_mention_text(s, config);
      CHECK(normalize_mention_text(once, config) == once);
      CHECK(once.find("  ") == std::string::npos);
    }
  }
}

TEST_CASE("mention_position examples and monotonicity") {
  CHECK(mention_position(Mention("a", 0, 5)) == 5);
  CHECK(mention_position(Mention("a", 10, 15)) == 25);
  CHECK(mention_position(Mention("a", 0, 1)) == 1);
  for (std::size_t s = 0; s < 20; ++s) {
    for (std::size_t e = s + 1; e < 25; ++e) {
      CHECK(mention_position(Mention("x", s, e + 1)) > mention_position(Mention("x", s, e)));
      if (s + 1 < e) {
        CHECK(mention_position(Mention("x", s + 1, e)) > mention_position(Mention("x", s, e)));
      }
    }
  }
}

TEST_CASE("Mention rejects empty spans") {
  CHECK_THROWS_AS(Mention("x", 3, 3), ContractViolation);
  CHECK_THROWS_AS(Mention("x", 4, 3), ContractViolation);
}

TEST_CASE("SchemaConfig validation") {
  SchemaConfig::Definition def;
  def.entity_types = {{"GENE", "@GENE@"}, {"DISEASE", "@DISEASE@"}};
  def.relation_types = {{"GDA", {"@GDA@", 2}}};
  CHECK_NOTHROW(SchemaConfig{def});

  SUBCASE("duplicate tokens") {
    auto bad = def;
    bad.entity_types["DISEASE"] = "@GENE@";
    CHECK_THROWS_WITH_AS(SchemaConfig{bad}, doctest::Contains("@GENE@"), SchemaError);
  }
  SUBCASE("token reused by separator") {
    auto bad = def;
    bad.hint_separator = "@GDA@";
    CHECK_THROWS_AS(SchemaConfig{bad}, SchemaError);
  }
  SUBCASE("substring tokens") {
    auto bad = def;
    bad.entity_types["GENEX"] = "@GENE@X";
    CHECK_THROWS_WITH_AS(SchemaConfig{bad}, doctest::Contains("substring"), SchemaError);
  }
  SUBCASE("arity below two") {
    auto bad = def;
    bad.relation_types["UNARY"] = {"@U@", 1};
    CHECK_THROWS_WITH_AS(SchemaConfig{bad}, doctest::Contains("@U@"), SchemaError);
  }
  SUBCASE("whitespace and empty tokens") {
    auto bad = def;
    bad.coref_separator = "; ";
    CHECK_THROWS_AS(SchemaConfig{bad}, SchemaError);
    bad.coref_separator = "";
    CHECK_THROWS_AS(SchemaConfig{bad}, SchemaError);
  }
}

TEST_CASE("SchemaConfig lookups") {
  const auto config = testing::random_schema_config();
  CHECK(config.max_arity() == 3);
  CHECK(config.entity_label_of("@GENE@") == std::optional<std::string>("GENE"));
  CHECK(config.relation_label_of("@DGM@") == std::optional<std::string>("DGM"));
  CHECK_FALSE(config.entity_label_of("@GDA@"));
  CHECK(config.is_special_token("@SEP@"));
  CHECK(config.is_special_token(";"));
  CHECK_FALSE(config.is_special_token("gene"));
  CHECK_THROWS_AS(config.entity_token("PROTEIN"), ContractViolation);
}

TEST_CASE("schema file reading") {
  std::istringstream in(
      "# demo\n"
      "entity GENE @GENE@\n"
      "entity DISEASE @DISEASE@   # trailing comment\n"
      "relation GDA @GDA@ 2\n"
      "hint_separator [SEP]\n"
      "case_fold false\n");
  auto config = read_schema(in);
  CHECK(config.entity_types().size() == 2);
  CHECK(config.arity("GDA") == 2);
  CHECK(config.hint_separator() == "[SEP]");
  CHECK_FALSE(config.case_fold());

  std::istringstream again(write_schema(config));
  CHECK(read_schema(again).definition().entity_types == config.definition().entity_types);

  std::istringstream dup("entity GENE @GENE@\nentity DISEASE @GENE@\n");
  CHECK_THROWS_WITH_AS(read_schema(dup), doctest::Contains("@GENE@"), SchemaError);
  std::istringstream arity("relation GDA @GDA@ two\n");
  CHECK_THROWS_WITH_AS(read_schema(arity), doctest::Contains("line 1"), FormatError);
  std::istringstream unknown("entity GENE @GENE@\nrelations GDA @GDA@ 2\n");
  CHECK_THROWS_WITH_AS(read_schema(unknown), doctest::Contains("relations"), FormatError);
}

TEST_CASE("schema files on disk") {
  const std::string fixtures = DOCRE_FIXTURE_DIR;
  auto config = load_schema(fixtures + "/examples.schema");
  CHECK(config.definition().entity_types == testing::example_schema().definition().entity_types);
  CHECK(config.max_arity() == 3);
  CHECK(config.hint_separator() == "@SEP@");
  CHECK_THROWS_WITH_AS(load_schema(fixtures + "/bad_duplicate.schema"), doctest::Contains("@GENE@"),
                       SchemaError);
  for (const char* name : {"cdr.schema", "gda.schema", "dgm.schema"}) {
    CHECK_NOTHROW(load_schema(std::string(DOCRE_SCHEMA_DIR) + "/" + name));
  }
}

TEST_CASE("AnnotatedDocument invariants") {
  AnnotatedDocument doc;
  doc.doc_id = "d";
  doc.text = "abc def";
  doc.sentence_spans = {{0, 3}, {4, 7}};
  doc.entities = {Entity{{Mention("abc", 0, 3)}, "GENE", ""}, Entity{{Mention("def", 4, 7)}, "GENE", ""}};
  doc.relations = {RelationInstance{{0, 1}, "GDA"}};
  CHECK_NOTHROW(doc.check_invariants());

  auto overlapping = doc;
  overlapping.sentence_spans = {{0, 5}, {4, 7}};
  CHECK_THROWS_AS(overlapping.check_invariants(), ContractViolation);

  auto dangling = doc;
  dangling.relations = {RelationInstance{{0, 5}, "GDA"}};
  CHECK_THROWS_AS(dangling.check_invariants(), ContractViolation);

  auto empty_entity = doc;
  empty_entity.entities[1].mentions.clear();
  CHECK_THROWS_AS(empty_entity.check_invariants(), ContractViolation);
}

TEST_CASE("document and parsed records survive a write/read cycle") {
  const auto config = testing::random_schema_config();
  testing::DocumentGenerator gen(11);
  for (int i = 0; i < 200; ++i) {
    auto doc = gen.document(config, "doc" + std::to_string(i));
    doc.sentence_spans = {{0, 100}, {101, 400}};
    if (i % 2 == 0) doc.title_length = 12;
    CHECK(document_from_record(document_to_record(doc)) == doc);

    ParsedDocument parsed{doc.doc_id, to_parsed_relations(doc, config)};
    CHECK(record_kind(parsed_to_record(parsed)) == RecordKind::kParsed);
    CHECK(parsed_from_record(parsed_to_record(parsed)) == parsed);
  }
  CHECK_THROWS_AS(document_from_record("{\"doc_id\": 1}", 3), FormatError);
  CHECK_THROWS_WITH(document_from_record("not json", 9), doctest::Contains("line 9"));
}
