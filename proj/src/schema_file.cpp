#include "docre/schema_file.hpp"

#include <fstream>
#include <sstream>

namespace docre {

namespace {

std::string strip_comment(const std::string& line) {
  auto hash = line.find('#');
  // '#' only starts a comment at the beginning of a token.
  while (hash != std::string::npos && hash > 0 && !is_space(line[hash - 1])) {
    hash = line.find('#', hash + 1);
  }
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool parse_bool(const std::string& value, std::size_t line_no) {
  if (value == "true" || value == "yes" || value == "1" || value == "on") return true;
  if (value == "false" || value == "no" || value == "0" || value == "off") return false;
  throw FormatError("case_fold expects true/false, got '" + value + "'", line_no);
}

}  // namespace

SchemaConfig read_schema(std::istream& in) {
  SchemaConfig::Definition def;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_whitespace(strip_comment(line));
    if (fields.empty()) continue;
    const std::string& key = fields[0];
    auto expect = [&](std::size_t n) {
      if (fields.size() != n) {
        throw FormatError("'" + key + "' expects " + std::to_string(n - 1) + " value(s), got " +
                              std::to_string(fields.size() - 1),
                          line_no);
      }
    };
    if (key == "entity") {
      expect(3);
      if (!def.entity_types.emplace(fields[1], fields[2]).second) {
        throw SchemaError("line " + std::to_string(line_no) + ": entity type '" + fields[1] +
                          "' declared twice");
      }
    } else if (key == "relation") {
      expect(4);
      std::size_t arity = 0;
      try {
        std::size_t used = 0;
        arity = std::stoul(fields[3], &used);
        if (used != fields[3].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw FormatError("relation '" + fields[1] + "' has non-numeric arity '" + fields[3] + "'",
                          line_no);
      }
      if (!def.relation_types.emplace(fields[1], RelationTypeSpec{fields[2], arity}).second) {
        throw SchemaError("line " + std::to_string(line_no) + ": relation type '" + fields[1] +
                          "' declared twice");
      }
    } else if (key == "coref_separator") {
      expect(2);
      def.coref_separator = fields[1];
    } else if (key == "hint_separator") {
      expect(2);
      def.hint_separator = fields[1];
    } else if (key == "start_token") {
      expect(2);
      def.start_token = fields[1];
    } else if (key == "end_token") {
      expect(2);
      def.end_token = fields[1];
    } else if (key == "case_fold") {
      expect(2);
      def.case_fold = parse_bool(fields[1], line_no);
    } else {
      throw FormatError("unknown schema key '" + key + "'", line_no);
    }
  }
  return SchemaConfig(std::move(def));
}

SchemaConfig load_schema(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file " + path.string());
  return read_schema(in);
}

std::string write_schema(const SchemaConfig& config) {
  std::ostringstream out;
  for (const auto& [label, token] : config.entity_types()) {
    out << "entity " << label << ' ' << token << '\n';
  }
  for (const auto& [label, spec] : config.relation_types()) {
    out << "relation " << label << ' ' << spec.token << ' ' << spec.arity << '\n';
  }
  out << "coref_separator " << config.coref_separator() << '\n'
      << "hint_separator " << config.hint_separator() << '\n'
      << "start_token " << config.start_token() << '\n'
      << "end_token " << config.end_token() << '\n'
      << "case_fold " << (config.case_fold() ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace docre
