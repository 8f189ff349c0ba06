#ifndef CAUSALFUSE_SCENARIO_HPP_
#define CAUSALFUSE_SCENARIO_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalfuse/hp.hpp"
#include "causalfuse/model.hpp"

namespace causalfuse {

enum class EvidenceSource { Sensor, Log, Expert };
const char* to_string(EvidenceSource s);
EvidenceSource evidence_source_from_string(const std::string& tag);

/// Consistency observations describe the actual world and restrict the set
/// of admissible contexts. Intervention observations perform surgery on the
/// model (needed where an effect is structurally unreachable).
enum class ObservationMode { Consistency, Intervention };

struct Observation {
  std::string node;
  bool value = false;
  EvidenceSource source = EvidenceSource::Expert;
  ObservationMode mode = ObservationMode::Consistency;
};

struct Evidence {
  std::map<std::string, bool> fixed_exogenous;
  std::vector<Observation> observations;
};

Evidence evidence_from_json(const std::string& text);

/// Applies intervention-mode observations to the model, then enumerates the
/// completions of fixed_exogenous whose solution matches every
/// consistency-mode observation. Contradictory evidence (no admissible
/// context) raises EvidenceError naming the conflict.
std::pair<CausalModel, std::vector<Context>> apply_evidence(
    const CausalModel& m, const Evidence& e);

/// Nodes whose value is the same in every admissible context are marked
/// pruned and folded to constants; all other equations have the fixed nodes
/// substituted away. Surviving nodes evaluate identically before and after.
std::pair<CausalModel, std::vector<std::string>> prune(const CausalModel& m,
                                                       const Evidence& e);

struct ScenarioCause {
  Literals candidate;
  std::vector<int> context_ids;  // admissible contexts supporting the cause
  Witness witness;               // from the first supporting context
  std::vector<std::string> domains;  // provenance tags of the candidate vars
};

struct ScenarioReport {
  Formula effect;
  int admissible_count = 0;
  std::vector<std::string> free_exogenous;  // take both values across contexts
  std::vector<std::string> pruned;
  std::vector<std::pair<std::string, std::string>> preemptions_crossed;
  std::vector<ScenarioCause> causes;
  std::vector<std::string> narrative;
};

/// Runs enumerate_causes per admissible context and aggregates the minimal
/// causes. The effect must hold in every admissible context.
ScenarioReport analyze(const CausalModel& m, const Evidence& e,
                       const Formula& effect,
                       const CauseQueryOptions& opts = {});

}  // namespace causalfuse

#endif  // CAUSALFUSE_SCENARIO_HPP_
