#include "docre/constraints.hpp"

#include <algorithm>

namespace docre {

std::string describe(const DecoderState& state) {
  return std::string("{last=") + to_string(state.last_class()) +
         ", entities=" + std::to_string(state.entities_in_current_relation()) +
         ", relations=" + std::to_string(state.relations_emitted()) + "}";
}

namespace {

void require_reachable(const DecoderState& s, const SchemaConfig& config) {
  const std::size_t n = s.entities_in_current_relation();
  bool ok = true;
  switch (s.last_class()) {
    case TokenClass::kBos:
      ok = n == 0 && s.relations_emitted() == 0;
      break;
    case TokenClass::kCopy:
    case TokenClass::kCoref:
      ok = n == 0 || n < config.max_arity();
      break;
    case TokenClass::kEntity:
      ok = n == 1 || (n >= 1 && n <= config.max_arity());
      break;
    case TokenClass::kRelation:
      ok = n == 0 && s.relations_emitted() >= 1;
      break;
    case TokenClass::kEos:
      throw ContractViolation("decoding already finished in state " + describe(s));
  }
  if (!ok) throw ContractViolation("unreachable decoder state " + describe(s));
}

}  // namespace

std::set<Symbol> next_valid_classes(const DecoderState& state, const SchemaConfig& config) {
  require_reachable(state, config);
  std::set<Symbol> valid{Symbol::eos()};
  switch (state.last_class()) {
    case TokenClass::kBos:
    case TokenClass::kCoref:
    case TokenClass::kRelation:
      valid.insert(Symbol::copy());
      break;
    case TokenClass::kCopy:
      valid.insert(Symbol::copy());
      valid.insert(Symbol::coref());
      for (const auto& [label, token] : config.entity_types()) valid.insert(Symbol::entity(label));
      break;
    case TokenClass::kEntity: {
      const std::size_t n = state.entities_in_current_relation();
      if (n < config.max_arity()) valid.insert(Symbol::copy());
      for (const auto& [label, spec] : config.relation_types()) {
        if (spec.arity == n) valid.insert(Symbol::relation(label));
      }
      break;
    }
    case TokenClass::kEos:
      break;
  }
  return valid;
}

DecoderState step(const DecoderState& state, const Symbol& emitted, const SchemaConfig& config) {
  auto valid = next_valid_classes(state, config);
  if (!valid.count(emitted)) {
    throw ContractViolation("symbol " + to_string(emitted) + " is not valid in state " +
                            describe(state));
  }
  switch (emitted.kind) {
    case TokenClass::kEntity:
      return DecoderState(emitted.kind, state.entities_in_current_relation() + 1,
                          state.relations_emitted());
    case TokenClass::kRelation:
      return DecoderState(emitted.kind, 0, state.relations_emitted() + 1);
    default:
      return DecoderState(emitted.kind, state.entities_in_current_relation(),
                          state.relations_emitted());
  }
}

std::vector<double> mask_scores(const DecoderState& state, std::span<const Symbol> candidates,
                                std::span<const double> scores, const SchemaConfig& config,
                                double floor) {
  if (candidates.size() != scores.size()) {
    throw ContractViolation("mask_scores: " + std::to_string(candidates.size()) +
                            " candidate classes but " + std::to_string(scores.size()) + " scores");
  }
  auto valid = next_valid_classes(state, config);
  std::vector<double> out(scores.begin(), scores.end());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].kind == TokenClass::kEos) continue;
    if (!valid.count(candidates[i])) out[i] = floor;
  }
  return out;
}

bool validate_sequence(std::span<const Symbol> classes, const SchemaConfig& config) {
  if (classes.size() < 2 || classes.front().kind != TokenClass::kBos ||
      classes.back().kind != TokenClass::kEos) {
    return false;
  }
  DecoderState state = DecoderState::initial();
  for (std::size_t i = 1; i < classes.size(); ++i) {
    if (!next_valid_classes(state, config).count(classes[i])) return false;
    state = step(state, classes[i], config);
    if (state.finished() && i + 1 != classes.size()) return false;
  }
  return state.finished();
}

}  // namespace docre
