#include "causalfuse/tree.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "causalfuse/json_io.hpp"

namespace causalfuse {

const char* to_string(GateKind g) {
  switch (g) {
    case GateKind::And:
      return "AND";
    case GateKind::Or:
      return "OR";
    case GateKind::Xor:
      return "XOR";
    case GateKind::PriorityAnd:
      return "PAND";
    case GateKind::Inhibit:
      return "INHIBIT";
  }
  return "AND";
}

const TreeNode* Tree::find(const std::string& name) const {
  for (const auto& node : nodes)
    if (node.name == name) return &node;
  return nullptr;
}

namespace {

GateKind gate_from_string(const std::string& tag) {
  if (tag == "AND") return GateKind::And;
  if (tag == "OR") return GateKind::Or;
  if (tag == "XOR") return GateKind::Xor;
  if (tag == "PAND") return GateKind::PriorityAnd;
  if (tag == "INHIBIT") return GateKind::Inhibit;
  throw Error("unknown gate '" + tag + "'");
}

void check_structure(const Tree& t) {
  std::unordered_map<std::string, const TreeNode*> by_name;
  for (const auto& node : t.nodes) {
    if (!is_valid_identifier(node.name))
      throw Error("invalid node name '" + node.name + "'");
    if (!by_name.emplace(node.name, &node).second)
      throw Error("duplicate node '" + node.name + "'");
  }
  if (!by_name.count(t.root))
    throw Error("root '" + t.root + "' is not a declared node");

  std::unordered_set<std::string> has_parent;
  for (const auto& node : t.nodes) {
    if (node.children.empty()) {
      if (node.gate.has_value())
        throw Error("leaf '" + node.name + "' must not carry a gate");
      continue;
    }
    if (!node.gate.has_value())
      throw Error("internal node '" + node.name + "' has no gate");
    if (t.kind == TreeKind::Attack && *node.gate != GateKind::And &&
        *node.gate != GateKind::Or)
      throw Error("attack trees support only AND and OR gates; '" +
                  node.name + "' uses " + to_string(*node.gate));
    std::unordered_set<std::string> local;
    for (const auto& child : node.children) {
      if (!by_name.count(child))
        throw Error("node '" + node.name + "' references undeclared child '" +
                    child + "'");
      if (!local.insert(child).second)
        throw Error("node '" + node.name + "' lists child '" + child +
                    "' twice");
      has_parent.insert(child);
    }
  }

  if (has_parent.count(t.root))
    throw Error("root '" + t.root + "' must not have a parent");
  for (const auto& node : t.nodes)
    if (node.name != t.root && !has_parent.count(node.name))
      throw Error("node '" + node.name +
                  "' has no parent; trees must have a unique root");

  // Cycle check (DFS with colors); sharing is fine, back edges are not.
  enum { White, Grey, Black };
  std::unordered_map<std::string, int> color;
  std::vector<std::pair<const TreeNode*, std::size_t>> stack;
  auto push = [&](const std::string& name) {
    color[name] = Grey;
    stack.emplace_back(by_name.at(name), 0);
  };
  push(t.root);
  std::size_t reached = 1;
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->children.size()) {
      const std::string& child = node->children[next++];
      int c = color.count(child) ? color[child] : White;
      if (c == Grey) throw Error("cycle through '" + child + "'");
      if (c == White) {
        push(child);
        ++reached;
      }
    } else {
      color[node->name] = Black;
      stack.pop_back();
    }
  }
  if (reached != t.nodes.size())
    for (const auto& node : t.nodes)
      if (!color.count(node.name))
        throw Error("node '" + node.name + "' is not reachable from the root");
}

}  // namespace

Tree parse_tree(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("tree document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "kind" && key != "root" && key != "nodes")
      throw Error("unknown key '" + key + "' in tree document");
  }
  for (const char* key : {"kind", "root", "nodes"})
    if (!doc.contains(key))
      throw Error(std::string("tree document is missing '") + key + "'");

  Tree t;
  std::string kind = doc["kind"].get<std::string>();
  if (kind == "fault")
    t.kind = TreeKind::Fault;
  else if (kind == "attack")
    t.kind = TreeKind::Attack;
  else
    throw Error("tree kind must be 'fault' or 'attack', got '" + kind + "'");
  t.root = doc["root"].get<std::string>();

  const Json& nodes = doc["nodes"];
  if (!nodes.is_object()) throw Error("'nodes' must be an object");
  for (const auto& [name, body] : nodes.items()) {
    if (!body.is_object())
      throw Error("node '" + name + "' must be an object");
    TreeNode node;
    node.name = name;
    for (const auto& [key, value] : body.items()) {
      (void)value;
      if (key != "gate" && key != "children")
        throw Error("unknown key '" + key + "' in node '" + name + "'");
    }
    if (body.contains("gate"))
      node.gate = gate_from_string(body["gate"].get<std::string>());
    if (body.contains("children"))
      node.children =
          json_string_array(body["children"], "children of '" + name + "'");
    t.nodes.push_back(std::move(node));
  }

  check_structure(t);
  return t;
}

namespace {

Formula gate_formula(const TreeNode& node, GateKind effective) {
  Formula f = Formula::var(node.children.front());
  for (std::size_t i = 1; i < node.children.size(); ++i) {
    Formula child = Formula::var(node.children[i]);
    switch (effective) {
      case GateKind::And:
        f = Formula::conjunction(std::move(f), std::move(child));
        break;
      case GateKind::Or:
        f = Formula::disjunction(std::move(f), std::move(child));
        break;
      case GateKind::Xor:
        f = Formula::exclusive_or(std::move(f), std::move(child));
        break;
      default:
        throw Error("unreduced gate");
    }
  }
  return f;
}

}  // namespace

CausalModel tree_to_causal(const Tree& t, Diagnostics* warnings) {
  for (const auto& node : t.nodes) {
    if (node.name.size() >= 4 &&
        node.name.compare(node.name.size() - 4, 4, "_exo") == 0)
      throw Error("node name '" + node.name +
                  "' collides with the reserved '_exo' suffix");
  }

  CausalModel m;
  m.name = t.root;
  Provenance tag =
      t.kind == TreeKind::Fault ? Provenance::FaultTree : Provenance::AttackTree;
  for (const auto& node : t.nodes) {
    m.endogenous.push_back(node.name);
    m.provenance.emplace(node.name, tag);
    if (node.children.empty()) {
      std::string driver = node.name + "_exo";
      m.exogenous.push_back(driver);
      m.equations.emplace(node.name, Formula::var(driver));
      continue;
    }
    GateKind effective = *node.gate;
    if (effective == GateKind::PriorityAnd) {
      warn(warnings, "PAND gate '" + node.name +
                         "' compiled as AND; event order is not expressible "
                         "in binary equations");
      effective = GateKind::And;
    } else if (effective == GateKind::Inhibit) {
      warn(warnings, "INHIBIT gate '" + node.name +
                         "' compiled as AND of its input and condition");
      effective = GateKind::And;
    }
    m.equations.emplace(node.name, gate_formula(node, effective));
  }
  return m;
}

}  // namespace causalfuse
