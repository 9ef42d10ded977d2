#pragma once

#include <compare>
#include <ostream>
#include <string>

namespace docre {

enum class TokenClass { kBos, kCopy, kCoref, kEntity, kRelation, kEos };

// A token class plus, for ENTITY and RELATION, the schema label it carries.
struct Symbol {
  TokenClass kind = TokenClass::kCopy;
  std::string label;

  static Symbol bos() { return {TokenClass::kBos, {}}; }
  static Symbol copy() { return {TokenClass::kCopy, {}}; }
  static Symbol coref() { return {TokenClass::kCoref, {}}; }
  static Symbol entity(std::string label) { return {TokenClass::kEntity, std::move(label)}; }
  static Symbol relation(std::string label) { return {TokenClass::kRelation, std::move(label)}; }
  static Symbol eos() { return {TokenClass::kEos, {}}; }

  auto operator<=>(const Symbol&) const = default;
  bool operator==(const Symbol&) const = default;
};

const char* to_string(TokenClass kind);
std::string to_string(const Symbol& symbol);
std::ostream& operator<<(std::ostream& os, const Symbol& symbol);

}  // namespace docre
