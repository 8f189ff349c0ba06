#include "causalfuse/dot.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace causalfuse {

namespace {

const char* color_of(Provenance p) {
  switch (p) {
    case Provenance::FaultTree:
      return "#1f77b4";
    case Provenance::AttackTree:
      return "#d62728";
    case Provenance::Hta:
      return "#2ca02c";
    case Provenance::Expert:
      return "#000000";
  }
  return "#000000";
}

std::string quoted(const std::string& name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string export_dot(const CausalModel& m, const DotHighlights& h) {
  std::unordered_map<std::string, int> decl_index;
  for (std::size_t i = 0; i < m.endogenous.size(); ++i)
    decl_index.emplace(m.endogenous[i], static_cast<int>(i));

  std::ostringstream out;
  out << "digraph " << quoted(m.name.empty() ? "causal_model" : m.name)
      << " {\n";
  out << "  rankdir=BT;\n";
  out << "  node [shape=box];\n";

  for (const auto& node : m.endogenous) {
    out << "  " << quoted(node) << " [color="
        << quoted(color_of(m.provenance_of(node)));
    if (h.pruned.count(node)) out << ", style=dashed";
    if (h.causes.count(node)) out << ", penwidth=2.0";
    out << "];\n";
  }

  // Structural edges run from each variable to its users; a structural edge
  // that restates a preemption pair is drawn once, dotted, below.
  std::vector<std::pair<int, int>> edges;
  for (const auto& node : m.endogenous) {
    auto eq = m.equations.find(node);
    if (eq == m.equations.end()) continue;
    for (const auto& dep : formula_vars(eq->second)) {
      auto it = decl_index.find(dep);
      if (it == decl_index.end()) continue;  // exogenous drivers stay implicit
      if (std::find(m.preemptions.begin(), m.preemptions.end(),
                    std::make_pair(dep, node)) != m.preemptions.end())
        continue;
      edges.emplace_back(it->second, decl_index.at(node));
    }
  }
  std::sort(edges.begin(), edges.end());
  for (const auto& [from, to] : edges)
    out << "  " << quoted(m.endogenous[from]) << " -> "
        << quoted(m.endogenous[to]) << ";\n";

  for (const auto& [blocker, blocked] : m.preemptions)
    out << "  " << quoted(blocker) << " -> " << quoted(blocked)
        << " [style=dotted];\n";

  out << "}\n";
  return out.str();
}

}  // namespace causalfuse
