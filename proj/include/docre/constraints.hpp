#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "docre/model.hpp"
#include "docre/tokens.hpp"

namespace docre {

// Position of a decoding beam in the linearization automaton.
class DecoderState {
 public:
  // The state before any token has been produced.
  static DecoderState initial() { return DecoderState(TokenClass::kBos, 0, 0); }

  // Restores a state held by an external decoder. Reachability is checked by
  // next_valid_classes / step, not here.
  DecoderState(TokenClass last_class, std::size_t entities_in_current_relation,
               std::size_t relations_emitted)
      : last_class_(last_class),
        entities_(entities_in_current_relation),
        relations_(relations_emitted) {}

  TokenClass last_class() const { return last_class_; }
  std::size_t entities_in_current_relation() const { return entities_; }
  std::size_t relations_emitted() const { return relations_; }
  bool finished() const { return last_class_ == TokenClass::kEos; }

  bool operator==(const DecoderState&) const = default;

 private:
  TokenClass last_class_;
  std::size_t entities_;
  std::size_t relations_;
};

// Symbols allowed after `state`. ENTITY is expanded to every entity label,
// RELATION to the labels whose arity equals the current entity count. EOS is
// always present. Throws ContractViolation for unreachable or finished states.
std::set<Symbol> next_valid_classes(const DecoderState& state, const SchemaConfig& config);

// Throws ContractViolation naming the symbol and state when the symbol is not
// allowed.
DecoderState step(const DecoderState& state, const Symbol& emitted, const SchemaConfig& config);

inline constexpr double kDefaultMaskFloor = -1e32;

// Replaces scores of candidates whose class is invalid after `state` with
// `floor`. EOS and valid candidates keep their scores.
std::vector<double> mask_scores(const DecoderState& state, std::span<const Symbol> candidates,
                                std::span<const double> scores, const SchemaConfig& config,
                                double floor = kDefaultMaskFloor);

// True iff the sequence starts with BOS, every transition is allowed, and it
// ends with its only EOS.
bool validate_sequence(std::span<const Symbol> classes, const SchemaConfig& config);

std::string describe(const DecoderState& state);

}  // namespace docre
