#ifndef CAUSALFUSE_HP_HPP_
#define CAUSALFUSE_HP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "causalfuse/model.hpp"

namespace causalfuse {

/// One primitive event X = x.
struct Literal {
  std::string var;
  bool value = false;

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.var == b.var && a.value == b.value;
  }
};

using Literals = std::vector<Literal>;

/// AC2 witness: the variable set W frozen at its actual values, together
/// with the alternative setting x' of the candidate.
struct Witness {
  std::vector<std::string> frozen;  // W, in canonical variable order
  Literals alternative;             // x', aligned with the candidate order
};

/// Outcome of the three-part actual-cause test for one candidate.
struct CauseVerdict {
  Literals candidate;
  Formula effect;
  bool ac1 = false;
  bool ac2 = false;
  bool ac3 = false;
  bool overall = false;
  /// Present iff ac2: replaying [X <- x', W <- w] against the model refutes
  /// the effect.
  std::optional<Witness> witness;
  /// Present iff !ac3: a strict subset (at its actual values) that already
  /// passes AC1 and AC2.
  std::optional<Literals> ac3_violation;
};

struct CauseQueryOptions {
  /// Largest candidate set enumerate_causes will consider.
  int max_cause_size = 3;
  /// Permit candidates that share variables with the effect formula.
  bool allow_effect_vars = false;
  /// Hard cap on |V|; the witness search is exponential, so oversized
  /// models are refused loudly rather than silently truncated.
  int max_model_size = 24;
};

/// The modified Halpern-Pearl test. AC1: the candidate and the effect hold
/// in (m, u). AC2: some W (frozen at actual values) and some alternative x'
/// defeat the effect; the search runs over W in increasing size and
/// declaration order, returning the first witness. AC3: no strict non-empty
/// subset of the candidate passes AC1 and AC2.
CauseVerdict is_actual_cause(const CausalModel& m, const Context& u,
                             const Literals& candidate, const Formula& effect,
                             const CauseQueryOptions& opts = {});

/// All minimal actual causes of `effect` with at most max_cause_size
/// variables, drawn from the endogenous variables at their actual values.
/// Results are ordered by size, then by variable declaration order.
/// Requires the effect to hold in (m, u); a failing effect is an error, not
/// an empty result.
std::vector<CauseVerdict> enumerate_causes(const CausalModel& m,
                                           const Context& u,
                                           const Formula& effect,
                                           const CauseQueryOptions& opts = {});

/// Plain counterfactual dependence: flipping the whole candidate defeats the
/// effect with nothing frozen (the W = {} special case of AC2).
bool but_for(const CausalModel& m, const Context& u, const Literals& candidate,
             const Formula& effect);

}  // namespace causalfuse

#endif  // CAUSALFUSE_HP_HPP_
