#ifndef CAUSALFUSE_SRC_COMPILED_HPP_
#define CAUSALFUSE_SRC_COMPILED_HPP_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "causalfuse/formula.hpp"
#include "causalfuse/model.hpp"

namespace causalfuse::detail {

// Postfix program over variable slots; evaluated with a tiny value stack.
struct CompiledFormula {
  enum class Op : std::uint8_t { PushVar, PushConst, Neg, Conj, Disj, Parity };
  struct Instr {
    Op op;
    std::int32_t slot = 0;  // PushVar
    std::uint8_t value = 0; // PushConst
  };
  std::vector<Instr> code;
  std::vector<std::int32_t> reads;  // distinct slots, ascending

  bool eval(const std::uint8_t* values) const;
};

// Index-based view of a validated model. Slots 0..exo_count-1 are the
// exogenous variables in declaration order, followed by the endogenous
// variables in declaration order. Built once, then shared by every query
// against the model.
class CompiledModel {
 public:
  // Throws ValidationError unless validate_model(m) is clean.
  explicit CompiledModel(const CausalModel& m);

  int exo_count() const { return exo_count_; }
  int endo_count() const { return static_cast<int>(names_.size()) - exo_count_; }
  int total() const { return static_cast<int>(names_.size()); }

  // -1 when the name is unknown.
  int slot_of(const std::string& name) const;
  const std::string& name_of(int slot) const { return names_[slot]; }
  bool is_endo_slot(int slot) const { return slot >= exo_count_; }

  // Endogenous slots in evaluation order.
  const std::vector<int>& topo_order() const { return topo_; }
  // Slots read by the equation of an endogenous slot.
  const std::vector<std::int32_t>& reads_of(int endo_slot) const;
  // Compiled structural equation of an endogenous slot.
  const CompiledFormula& equation(int endo_slot) const {
    return equations_[endo_slot - exo_count_];
  }

  // Solves the equations into `values` (size total()). Exogenous entries
  // must be preset. `clamps` may be null; entries >= 0 force a value and
  // shadow the equation (interventions and frozen witness sets).
  void solve(std::uint8_t* values, const std::int8_t* clamps = nullptr) const;

  // Compiles an arbitrary formula against this model's slots. Throws Error
  // on variables that are not part of the model.
  CompiledFormula compile(const Formula& f) const;

  // Per-slot flag: slot can reach one of `targets` through equations
  // (targets themselves included).
  std::vector<char> ancestors_of(const std::vector<int>& targets) const;

 private:
  int exo_count_ = 0;
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::vector<CompiledFormula> equations_;  // indexed by slot - exo_count
  std::vector<int> topo_;
};

}  // namespace causalfuse::detail

#endif  // CAUSALFUSE_SRC_COMPILED_HPP_
