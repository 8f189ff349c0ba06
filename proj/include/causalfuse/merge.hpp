#ifndef CAUSALFUSE_MERGE_HPP_
#define CAUSALFUSE_MERGE_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "causalfuse/diagnostics.hpp"
#include "causalfuse/model.hpp"

namespace causalfuse {

/// Expert glue applied by extend, in order: equates, added nodes, rewrites.
/// Name collisions are never repaired silently; identical definitions on
/// both sides merge, anything else is an error.
struct GlueSpec {
  /// (base node, incoming node): the incoming node is renamed onto the base
  /// node. The incoming node must be a root of its model.
  std::vector<std::pair<std::string, std::string>> equate;
  struct AddedNode {
    std::string name;
    Formula equation;
    Provenance provenance = Provenance::Expert;
  };
  std::vector<AddedNode> added_nodes;
  struct Rewrite {
    std::string node;
    Formula equation;
  };
  std::vector<Rewrite> rewrites;
  /// Extra preemption annotations, e.g. a system-vs-driver direction chosen
  /// per analysis.
  std::vector<std::pair<std::string, std::string>> preemptions;
};

/// Replaces the exogenous-driven leaf of `base` by the root of `sub`. When
/// the root carries the same name as the leaf, the two are identified and
/// the leaf adopts the root's equation; otherwise the leaf's equation
/// becomes a reference to the root and the leaf's "_exo" driver disappears.
CausalModel refine(const CausalModel& base, const std::string& leaf,
                   const CausalModel& sub);

/// Union of the two models with the glue applied, fully validated.
CausalModel extend(const CausalModel& base, const CausalModel& ext,
                   const GlueSpec& glue);

/// Union of `a` and `b` with `nb` (a root of `b`) renamed to `na`. When `na`
/// is an exogenous-driven leaf of `a`, it adopts `nb`'s equation.
CausalModel equate(const CausalModel& a, const std::string& na,
                   const CausalModel& b, const std::string& nb);

/// The sub-model rooted at `node`: the node, everything its equations reach,
/// and their exogenous drivers.
CausalModel submodel(const CausalModel& m, const std::string& node);

/// Runs a declarative merge plan (JSON). Relative paths inside the plan
/// resolve against `base_dir`. Step ops: load-model, load-tree, load-hta,
/// split, refine, equate, extend, output.
CausalModel run_merge_plan(const std::string& plan_json,
                           const std::filesystem::path& base_dir,
                           Diagnostics* warnings = nullptr);

}  // namespace causalfuse

#endif  // CAUSALFUSE_MERGE_HPP_
