#ifndef CAUSALFUSE_HTA_HPP_
#define CAUSALFUSE_HTA_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causalfuse/diagnostics.hpp"
#include "causalfuse/model.hpp"

namespace causalfuse {

struct HtaRule {
  std::string goal;
  std::optional<Formula> condition;
  std::vector<std::string> subgoals;
};

/// Goal hierarchy in the rule format
///   rule(goal=NAME){ Condition(EXPR)? --> Goal(NAME)* }
/// Goals without a rule (or with an empty rule body) are leaves. The top
/// goal is the unique goal that appears in no rule body.
struct HtaModel {
  std::vector<std::string> goals;  // discovery order
  std::vector<HtaRule> rules;      // at most one per goal
  std::string top;

  const HtaRule* rule_for(const std::string& goal) const;
};

HtaModel parse_hta(const std::string& text);

enum class FailureCombinator { And, Or };

/// Extra effect node introduced by the inversion, wired from already
/// generated nodes (e.g. a crash that a group of goal failures brings about).
struct InversionTarget {
  std::string name;
  std::vector<std::string> operands;
  FailureCombinator combinator = FailureCombinator::And;
};

/// Expert-supplied recipe for turning a positive goal model into a negative
/// (failure-oriented) causal model. Inversion is driven entirely by this
/// data; nothing is inferred, so every choice stays reviewable.
struct InversionSpec {
  /// Goal -> name of the variable modelling its failure.
  std::map<std::string, std::string> failure_name;
  /// Goals kept positive, with their variable names (preconditions and
  /// escape actions such as letting a car pass).
  std::map<std::string, std::string> positive_keep;
  /// Node -> how its operand failures combine. Required where a node ends up
  /// with more than one operand.
  std::map<std::string, FailureCombinator> combinator;
  /// Node -> explicit operand list, overriding the default (the output
  /// names of the goal's subgoals, in rule order).
  std::map<std::string, std::vector<std::string>> operands;
  /// (node, guard): appends a negated conjunct "& !guard" to the node's
  /// equation and records the preemption pair (guard, node).
  std::vector<std::pair<std::string, std::string>> guards;
  /// Effect nodes; when present, the top goal's failure becomes their
  /// disjunction (in the listed order).
  std::vector<InversionTarget> targets;
};

InversionSpec inversion_spec_from_json(const std::string& text);

/// Builds the negative causal model. Leaf nodes (no operands) are driven by
/// fresh "_exo" inputs; guards become preemption annotations. Targets that
/// turn out to be constant across every context are reported as warnings,
/// since such effects can only be produced under interventions.
CausalModel invert_hta(const HtaModel& h, const InversionSpec& spec,
                       Diagnostics* warnings = nullptr);

}  // namespace causalfuse

#endif  // CAUSALFUSE_HTA_HPP_
