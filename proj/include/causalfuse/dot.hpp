#ifndef CAUSALFUSE_DOT_HPP_
#define CAUSALFUSE_DOT_HPP_

#include <set>
#include <string>

#include "causalfuse/model.hpp"

namespace causalfuse {

struct DotHighlights {
  std::set<std::string> pruned;  // dashed borders
  std::set<std::string> causes;  // heavy borders
};

/// Deterministic Graphviz rendering of the endogenous dependency graph.
/// Preemption pairs become dotted edges (replacing the structural edge),
/// pruned nodes are dashed, and provenance picks the border color. Identical
/// inputs always produce byte-identical output.
std::string export_dot(const CausalModel& m, const DotHighlights& h = {});

}  // namespace causalfuse

#endif  // CAUSALFUSE_DOT_HPP_
