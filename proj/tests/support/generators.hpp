#ifndef CAUSALFUSE_TESTS_GENERATORS_HPP_
#define CAUSALFUSE_TESTS_GENERATORS_HPP_

// Deterministic random inputs for property tests: formulas, trees, and small
// causal models. Everything is seeded explicitly so failures reproduce.

#include <random>
#include <string>
#include <vector>

#include "causalfuse/formula.hpp"
#include "causalfuse/model.hpp"
#include "causalfuse/tree.hpp"

namespace causalfuse::testing {

inline Formula random_formula(std::mt19937* rng,
                              const std::vector<std::string>& vars,
                              int depth) {
  std::uniform_int_distribution<int> kind_dist(0, depth <= 0 ? 1 : 5);
  std::uniform_int_distribution<std::size_t> var_dist(0, vars.size() - 1);
  switch (kind_dist(*rng)) {
    case 0:
      return Formula::var(vars[var_dist(*rng)]);
    case 1:
      return Formula::constant((*rng)() & 1u);
    case 2:
      return Formula::negation(random_formula(rng, vars, depth - 1));
    case 3:
      return Formula::conjunction(random_formula(rng, vars, depth - 1),
                                  random_formula(rng, vars, depth - 1));
    case 4:
      return Formula::disjunction(random_formula(rng, vars, depth - 1),
                                  random_formula(rng, vars, depth - 1));
    default:
      return Formula::exclusive_or(random_formula(rng, vars, depth - 1),
                                   random_formula(rng, vars, depth - 1));
  }
}

// Random acyclic binary model: each endogenous variable reads earlier
// variables or exogenous inputs, through a random formula.
inline CausalModel random_model(std::mt19937* rng, int n_exo, int n_endo) {
  CausalModel m;
  m.name = "random";
  for (int i = 0; i < n_exo; ++i) m.exogenous.push_back("u" + std::to_string(i));
  for (int i = 0; i < n_endo; ++i) {
    std::string name = "v" + std::to_string(i);
    std::vector<std::string> pool = m.exogenous;
    for (int j = 0; j < i; ++j) pool.push_back("v" + std::to_string(j));
    std::uniform_int_distribution<int> depth_dist(1, 3);
    Formula eq = random_formula(rng, pool, depth_dist(*rng));
    // Constant-only equations are legal but dull; nudge towards structure.
    if (formula_vars(eq).empty())
      eq = Formula::disjunction(eq, Formula::var(pool[(*rng)() % pool.size()]));
    m.endogenous.push_back(name);
    m.equations.emplace(name, std::move(eq));
  }
  return m;
}

inline std::vector<Context> all_contexts(const CausalModel& m) {
  std::vector<Context> out;
  std::size_t total = std::size_t{1} << m.exogenous.size();
  for (std::size_t bits = 0; bits < total; ++bits) {
    Context u;
    for (std::size_t i = 0; i < m.exogenous.size(); ++i)
      u.emplace(m.exogenous[i], ((bits >> i) & 1u) != 0);
    out.push_back(std::move(u));
  }
  return out;
}

// Random tree with the given number of leaves and mixed gates. Internal
// nodes take 2..3 children; `allow_xor` off keeps attack trees legal.
inline Tree random_tree(std::mt19937* rng, int leaves, bool allow_xor) {
  Tree t;
  t.kind = allow_xor ? TreeKind::Fault : TreeKind::Attack;
  std::vector<std::string> frontier;
  int counter = 0;
  for (int i = 0; i < leaves; ++i) {
    std::string name = "leaf" + std::to_string(i);
    t.nodes.push_back({name, std::nullopt, {}});
    frontier.push_back(name);
  }
  while (frontier.size() > 1) {
    std::uniform_int_distribution<int> arity_dist(
        2, std::min<int>(3, static_cast<int>(frontier.size())));
    int arity = arity_dist(*rng);
    TreeNode node;
    node.name = "gate" + std::to_string(counter++);
    for (int i = 0; i < arity; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, frontier.size() - 1);
      std::size_t idx = pick(*rng);
      node.children.push_back(frontier[idx]);
      frontier.erase(frontier.begin() + static_cast<long>(idx));
    }
    std::uniform_int_distribution<int> gate_dist(0, allow_xor ? 2 : 1);
    int g = gate_dist(*rng);
    node.gate = g == 0 ? GateKind::And : g == 1 ? GateKind::Or : GateKind::Xor;
    frontier.push_back(node.name);
    t.nodes.push_back(std::move(node));
  }
  t.root = frontier.front();
  // Single-leaf trees degenerate to a lone root.
  return t;
}

// Direct recursive tree evaluation; the oracle for the tree-to-model
// transform. Gates fold left to right.
inline bool eval_tree(const Tree& t, const std::string& node,
                      const std::map<std::string, bool>& leaf_values) {
  const TreeNode* n = t.find(node);
  if (n->children.empty()) return leaf_values.at(node);
  bool acc = eval_tree(t, n->children.front(), leaf_values);
  for (std::size_t i = 1; i < n->children.size(); ++i) {
    bool next = eval_tree(t, n->children[i], leaf_values);
    switch (*n->gate) {
      case GateKind::Or:
        acc = acc || next;
        break;
      case GateKind::Xor:
        acc = acc != next;
        break;
      default:  // AND, PAND, INHIBIT all conjoin
        acc = acc && next;
        break;
    }
  }
  return acc;
}

}  // namespace causalfuse::testing

#endif  // CAUSALFUSE_TESTS_GENERATORS_HPP_
