#pragma once

#include <filesystem>
#include <istream>
#include <string>

#include "docre/model.hpp"

namespace docre {

// Reads a schema config in the key/value layout:
//
//   # comment
//   entity    GENE     @GENE@
//   relation  GDA      @GDA@   2
//   coref_separator ;
//   hint_separator  @SEP@
//   start_token     @START@
//   end_token       @END@
//   case_fold       true
//
// Unset scalar keys keep their defaults. Errors are FormatError (bad line)
// or SchemaError (inconsistent vocabulary), both naming the offending token.
SchemaConfig read_schema(std::istream& in);
SchemaConfig load_schema(const std::filesystem::path& path);

std::string write_schema(const SchemaConfig& config);

}  // namespace docre
