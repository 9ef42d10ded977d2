#include "docre/tokens.hpp"

namespace docre {

const char* to_string(TokenClass kind) {
  switch (kind) {
    case TokenClass::kBos: return "BOS";
    case TokenClass::kCopy: return "COPY";
    case TokenClass::kCoref: return "COREF";
    case TokenClass::kEntity: return "ENTITY";
    case TokenClass::kRelation: return "RELATION";
    case TokenClass::kEos: return "EOS";
  }
  return "?";
}

std::string to_string(const Symbol& symbol) {
  std::string out = to_string(symbol.kind);
  if (!symbol.label.empty()) out += "(" + symbol.label + ")";
  return out;
}

std::ostream& operator<<(std::ostream& os, const Symbol& symbol) { return os << to_string(symbol); }

}  // namespace docre
