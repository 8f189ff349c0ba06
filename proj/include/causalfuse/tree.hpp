#ifndef CAUSALFUSE_TREE_HPP_
#define CAUSALFUSE_TREE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "causalfuse/diagnostics.hpp"
#include "causalfuse/model.hpp"

namespace causalfuse {

enum class GateKind { And, Or, Xor, PriorityAnd, Inhibit };

const char* to_string(GateKind g);

enum class TreeKind { Fault, Attack };

struct TreeNode {
  std::string name;
  std::optional<GateKind> gate;       // internal nodes only
  std::vector<std::string> children;  // empty for leaves
};

/// Gate-typed DAG with a distinguished root. Sharing is allowed (a node may
/// have several parents); cycles and unreachable nodes are not.
struct Tree {
  TreeKind kind = TreeKind::Fault;
  std::string root;
  std::vector<TreeNode> nodes;  // declaration order

  const TreeNode* find(const std::string& name) const;
};

/// Parses {kind, root, nodes: {name: {gate?, children?}}}. Attack trees
/// support only AND and OR gates.
Tree parse_tree(const std::string& json_text);

/// Compiles a tree into a causal model: every node becomes an endogenous
/// variable, leaves are driven by fresh "_exo" inputs, and each gate becomes
/// the corresponding propositional formula over its children.
///
/// PAND and INHIBIT gates compile to plain conjunction; binary equations
/// cannot express event order, so each such gate emits a warning.
CausalModel tree_to_causal(const Tree& t, Diagnostics* warnings = nullptr);

}  // namespace causalfuse

#endif  // CAUSALFUSE_TREE_HPP_
