#include "causalfuse/hp.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "compiled.hpp"

namespace causalfuse {

namespace {

using detail::CompiledFormula;
using detail::CompiledModel;

constexpr std::size_t kStateCap = std::size_t{1} << 21;

// Advances `comb` (ascending positions into a pool of size n) to the next
// combination in lexicographic order. Returns false after the last one.
bool next_combination(std::vector<int>* comb, int n) {
  int k = static_cast<int>(comb->size());
  for (int i = k - 1; i >= 0; --i) {
    if ((*comb)[i] < n - (k - i)) {
      ++(*comb)[i];
      for (int j = i + 1; j < k; ++j) (*comb)[j] = (*comb)[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Shared state for one (model, context, effect) query.
struct HpEngine {
  CompiledModel cm;
  CompiledFormula phi;
  std::vector<std::uint8_t> actual;  // solved values in (m, u)
  std::vector<int> phi_endo_slots;

  HpEngine(const CausalModel& m, const Context& u, const Formula& effect)
      : cm(m), phi(cm.compile(effect)) {
    actual.assign(cm.total(), 0);
    if (static_cast<int>(u.size()) != cm.exo_count())
      throw Error("context must assign exactly the exogenous variables");
    for (const auto& [name, value] : u) {
      int slot = cm.slot_of(name);
      if (slot < 0 || cm.is_endo_slot(slot))
        throw Error("context assigns '" + name +
                    "', which is not an exogenous variable");
      actual[slot] = value ? 1 : 0;
    }
    cm.solve(actual.data());
    for (std::int32_t r : phi.reads)
      if (cm.is_endo_slot(r)) phi_endo_slots.push_back(r);
  }

  bool phi_actual() const { return phi.eval(actual.data()); }

  // Direct test of [X <- x', W <- w]~phi with w fixed to the actual values.
  bool counterfactual_refutes(const std::vector<int>& x_slots,
                              unsigned alt_bits,
                              const std::vector<int>& w_slots) const {
    std::vector<std::uint8_t> values(actual);
    std::vector<std::int8_t> clamps(cm.total(), -1);
    std::size_t k = x_slots.size();
    for (std::size_t i = 0; i < k; ++i)
      clamps[x_slots[i]] =
          static_cast<std::int8_t>((alt_bits >> (k - 1 - i)) & 1u);
    for (int w : w_slots) clamps[w] = static_cast<std::int8_t>(actual[w]);
    cm.solve(values.data(), clamps.data());
    return !phi.eval(values.data());
  }

  // Decides whether ANY witness set W works for this alternative setting,
  // without enumerating subsets. The solution of a clamped model is exactly
  // an assignment in which every variable outside X either recomputes from
  // its equation or keeps its actual value; the search walks the dependency
  // order, branching only where those two values differ, and merges states
  // that agree on everything later equations and the effect still read.
  bool alternative_can_refute(const std::vector<int>& x_slots,
                              unsigned alt_bits) const {
    std::vector<char> in_x(cm.total(), 0);
    for (int s : x_slots) in_x[s] = 1;
    std::vector<char> relevant = cm.ancestors_of(phi_endo_slots);

    std::vector<int> order;
    for (int slot : cm.topo_order())
      if (relevant[slot] && !in_x[slot]) order.push_back(slot);

    // live[i]: slots decided before step i that step i.. or the effect read.
    std::vector<std::vector<int>> live(order.size() + 1);
    {
      std::vector<char> needed(cm.total(), 0);
      for (std::int32_t r : phi.reads)
        if (cm.is_endo_slot(r) && !in_x[r]) needed[r] = 1;
      for (std::size_t i = order.size(); i-- > 0;) {
        for (std::size_t j = 0; j <= i; ++j)
          if (needed[order[j]]) live[i + 1].push_back(order[j]);
        for (std::int32_t r : cm.reads_of(order[i]))
          if (cm.is_endo_slot(r) && !in_x[r]) needed[r] = 1;
      }
    }

    std::vector<std::uint8_t> base(actual);
    std::size_t k = x_slots.size();
    for (std::size_t i = 0; i < k; ++i)
      base[x_slots[i]] = (alt_bits >> (k - 1 - i)) & 1u;

    std::vector<std::vector<std::uint8_t>> frontier;
    frontier.push_back(std::move(base));
    std::size_t explored = 1;
    for (std::size_t level = 0; level < order.size(); ++level) {
      int slot = order[level];
      std::vector<std::vector<std::uint8_t>> next;
      std::unordered_set<std::string> seen;
      auto admit = [&](std::vector<std::uint8_t>&& state) {
        std::string key;
        key.reserve(live[level + 1].size());
        for (int ls : live[level + 1])
          key.push_back(static_cast<char>(state[ls]));
        if (seen.insert(std::move(key)).second)
          next.push_back(std::move(state));
      };
      for (auto& state : frontier) {
        std::uint8_t computed = cm.equation(slot).eval(state.data()) ? 1 : 0;
        if (computed == actual[slot]) {
          state[slot] = computed;
          admit(std::move(state));
        } else {
          std::vector<std::uint8_t> frozen(state);
          frozen[slot] = actual[slot];
          admit(std::move(frozen));
          state[slot] = computed;
          admit(std::move(state));
        }
      }
      explored += next.size();
      if (explored > kStateCap)
        throw SearchCapError("witness existence search exceeded the state cap");
      frontier = std::move(next);
    }

    for (const auto& state : frontier)
      if (!phi.eval(state.data())) return true;
    return false;
  }

  // True iff some (W, x') pair satisfies the AC2 counterfactual.
  bool ac2_holds(const std::vector<int>& x_slots, unsigned actual_bits) const {
    unsigned patterns = 1u << x_slots.size();
    for (unsigned alt = 0; alt < patterns; ++alt) {
      if (alt == actual_bits) continue;
      if (alternative_can_refute(x_slots, alt)) return true;
    }
    return false;
  }

  // First witness in canonical order: W by (size, declaration order), the
  // alternative setting innermost. Call only once ac2_holds said yes.
  Witness first_witness(const std::vector<int>& x_slots, unsigned actual_bits,
                        const Literals& candidate) const {
    std::vector<int> pool;
    std::vector<char> in_x(cm.total(), 0);
    for (int s : x_slots) in_x[s] = 1;
    for (int s = cm.exo_count(); s < cm.total(); ++s)
      if (!in_x[s]) pool.push_back(s);

    unsigned patterns = 1u << x_slots.size();
    int n = static_cast<int>(pool.size());
    for (int size = 0; size <= n; ++size) {
      std::vector<int> comb(size);
      for (int i = 0; i < size; ++i) comb[i] = i;
      bool more = true;
      while (more) {
        std::vector<int> w_slots;
        w_slots.reserve(size);
        for (int idx : comb) w_slots.push_back(pool[idx]);
        for (unsigned alt = 0; alt < patterns; ++alt) {
          if (alt == actual_bits) continue;
          if (counterfactual_refutes(x_slots, alt, w_slots)) {
            Witness w;
            for (int s : w_slots) w.frozen.push_back(cm.name_of(s));
            std::size_t k = x_slots.size();
            for (std::size_t i = 0; i < k; ++i)
              w.alternative.push_back(
                  {candidate[i].var, ((alt >> (k - 1 - i)) & 1u) != 0});
            return w;
          }
        }
        more = size > 0 && next_combination(&comb, n);
      }
    }
    throw Error("witness search exhausted after a positive existence check");
  }
};

std::vector<int> candidate_slots(const HpEngine& eng, const Literals& cand) {
  if (cand.empty()) throw Error("candidate must name at least one variable");
  if (cand.size() > 20)
    throw SearchCapError("candidate sets above 20 variables are not searched");
  std::vector<int> slots;
  std::unordered_set<std::string> seen;
  for (const auto& lit : cand) {
    int slot = eng.cm.slot_of(lit.var);
    if (slot < 0)
      throw Error("candidate names unknown variable '" + lit.var + "'");
    if (!eng.cm.is_endo_slot(slot))
      throw Error("candidate variable '" + lit.var + "' is exogenous");
    if (!seen.insert(lit.var).second)
      throw Error("candidate names '" + lit.var + "' twice");
    slots.push_back(slot);
  }
  return slots;
}

void check_effect_overlap(const Literals& cand, const Formula& effect,
                          bool allowed) {
  if (allowed) return;
  std::set<std::string> vars = formula_vars(effect);
  for (const auto& lit : cand)
    if (vars.count(lit.var))
      throw Error("candidate variable '" + lit.var +
                  "' occurs in the effect formula (pass allow_effect_vars to "
                  "permit this)");
}

void check_model_size(const HpEngine& eng, const CauseQueryOptions& opts) {
  if (eng.cm.endo_count() > opts.max_model_size) {
    std::ostringstream msg;
    msg << "model has " << eng.cm.endo_count()
        << " endogenous variables, above the search cap of "
        << opts.max_model_size << " (raise max_model_size to proceed)";
    throw SearchCapError(msg.str());
  }
}

unsigned bits_of(const Literals& cand) {
  unsigned bits = 0;
  for (const auto& lit : cand) bits = (bits << 1) | (lit.value ? 1u : 0u);
  return bits;
}

// AC2 for a subset of the candidate taken at its ACTUAL values; used by the
// minimality check.
bool subset_passes_ac1_ac2(const HpEngine& eng,
                           const std::vector<int>& subset_slots) {
  if (!eng.phi_actual()) return false;
  unsigned actual_bits = 0;
  for (int s : subset_slots)
    actual_bits = (actual_bits << 1) | eng.actual[s];
  return eng.ac2_holds(subset_slots, actual_bits);
}

}  // namespace

CauseVerdict is_actual_cause(const CausalModel& m, const Context& u,
                             const Literals& candidate, const Formula& effect,
                             const CauseQueryOptions& opts) {
  HpEngine eng(m, u, effect);
  check_model_size(eng, opts);
  std::vector<int> x_slots = candidate_slots(eng, candidate);
  check_effect_overlap(candidate, effect, opts.allow_effect_vars);

  CauseVerdict verdict;
  verdict.candidate = candidate;
  verdict.effect = effect;

  bool candidate_holds = true;
  for (std::size_t i = 0; i < x_slots.size(); ++i)
    candidate_holds &= eng.actual[x_slots[i]] == (candidate[i].value ? 1 : 0);
  verdict.ac1 = candidate_holds && eng.phi_actual();

  unsigned x_bits = bits_of(candidate);
  verdict.ac2 = eng.ac2_holds(x_slots, x_bits);
  if (verdict.ac2)
    verdict.witness = eng.first_witness(x_slots, x_bits, candidate);

  // AC3: strict non-empty subsets in (size, candidate order), each at its
  // actual values.
  verdict.ac3 = true;
  int k = static_cast<int>(x_slots.size());
  for (int size = 1; size < k && verdict.ac3; ++size) {
    std::vector<int> comb(size);
    for (int i = 0; i < size; ++i) comb[i] = i;
    do {
      std::vector<int> subset_slots;
      for (int idx : comb) subset_slots.push_back(x_slots[idx]);
      if (subset_passes_ac1_ac2(eng, subset_slots)) {
        verdict.ac3 = false;
        Literals violation;
        for (int idx : comb)
          violation.push_back(
              {candidate[idx].var, eng.actual[x_slots[idx]] != 0});
        verdict.ac3_violation = std::move(violation);
        break;
      }
    } while (next_combination(&comb, k));
  }

  verdict.overall = verdict.ac1 && verdict.ac2 && verdict.ac3;
  return verdict;
}

std::vector<CauseVerdict> enumerate_causes(const CausalModel& m,
                                           const Context& u,
                                           const Formula& effect,
                                           const CauseQueryOptions& opts) {
  if (opts.max_cause_size < 1)
    throw Error("max_cause_size must be at least 1");
  HpEngine eng(m, u, effect);
  check_model_size(eng, opts);
  if (!eng.phi_actual())
    throw Error("effect does not hold in the given context");

  std::set<std::string> effect_vars = formula_vars(effect);
  std::vector<int> eligible;
  for (int s = eng.cm.exo_count(); s < eng.cm.total(); ++s) {
    if (!opts.allow_effect_vars && effect_vars.count(eng.cm.name_of(s)))
      continue;
    eligible.push_back(s);
  }

  // Sorted slot sets that already passed AC1 and AC2; any superset fails
  // minimality and is skipped without testing.
  std::vector<std::vector<int>> established;
  auto contains_established = [&](const std::vector<int>& sorted) {
    for (const auto& small : established) {
      if (small.size() >= sorted.size()) continue;
      if (std::includes(sorted.begin(), sorted.end(), small.begin(),
                        small.end()))
        return true;
    }
    return false;
  };

  std::vector<CauseVerdict> out;
  int n = static_cast<int>(eligible.size());
  int max_size = std::min(opts.max_cause_size, n);
  for (int size = 1; size <= max_size; ++size) {
    std::vector<int> comb(size);
    for (int i = 0; i < size; ++i) comb[i] = i;
    do {
      std::vector<int> x_slots;
      x_slots.reserve(size);
      for (int idx : comb) x_slots.push_back(eligible[idx]);
      std::vector<int> sorted(x_slots);
      std::sort(sorted.begin(), sorted.end());
      if (contains_established(sorted)) continue;

      unsigned actual_bits = 0;
      Literals candidate;
      for (int s : x_slots) {
        actual_bits = (actual_bits << 1) | eng.actual[s];
        candidate.push_back({eng.cm.name_of(s), eng.actual[s] != 0});
      }
      if (!eng.ac2_holds(x_slots, actual_bits)) continue;
      established.push_back(std::move(sorted));

      CauseVerdict verdict;
      verdict.candidate = std::move(candidate);
      verdict.effect = effect;
      verdict.ac1 = true;
      verdict.ac2 = true;
      verdict.ac3 = true;  // no smaller established set is contained
      verdict.overall = true;
      verdict.witness = eng.first_witness(x_slots, actual_bits,
                                          verdict.candidate);
      out.push_back(std::move(verdict));
    } while (next_combination(&comb, n));
  }
  return out;
}

bool but_for(const CausalModel& m, const Context& u, const Literals& candidate,
             const Formula& effect) {
  HpEngine eng(m, u, effect);
  std::vector<int> x_slots = candidate_slots(eng, candidate);
  check_effect_overlap(candidate, effect, false);

  for (std::size_t i = 0; i < x_slots.size(); ++i)
    if (eng.actual[x_slots[i]] != (candidate[i].value ? 1 : 0)) return false;
  if (!eng.phi_actual()) return false;

  unsigned flipped = ~bits_of(candidate) & ((1u << x_slots.size()) - 1u);
  return eng.counterfactual_refutes(x_slots, flipped, {});
}

}  // namespace causalfuse
