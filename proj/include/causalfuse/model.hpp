#ifndef CAUSALFUSE_MODEL_HPP_
#define CAUSALFUSE_MODEL_HPP_

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "causalfuse/formula.hpp"

namespace causalfuse {

/// Origin of a node in a merged socio-technical model.
enum class Provenance { FaultTree, AttackTree, Hta, Expert };

const char* to_string(Provenance p);
Provenance provenance_from_string(const std::string& tag);

/// Binary causal model: exogenous inputs U, endogenous variables V, one
/// structural equation per endogenous variable, plus annotations.
///
/// Declaration order of `exogenous` and `endogenous` is significant: it is
/// the canonical variable order used by searches, reports and exports, so
/// that identical inputs always produce identical outputs.
struct CausalModel {
  std::string name;
  std::vector<std::string> exogenous;
  std::vector<std::string> endogenous;
  std::map<std::string, Formula> equations;
  /// (blocker, blocked) pairs. Annotations only: the causal content must
  /// already be present in the equations as negated conjuncts.
  std::vector<std::pair<std::string, std::string>> preemptions;
  /// Missing entries default to Provenance::Expert.
  std::map<std::string, Provenance> provenance;

  bool is_exogenous(const std::string& name) const;
  bool is_endogenous(const std::string& name) const;
  Provenance provenance_of(const std::string& name) const;
};

struct ValidationIssue {
  enum class Kind {
    BadName,         // identifier does not match the variable grammar
    DuplicateName,   // repeated within U, within V, or across U and V
    MissingEquation, // endogenous variable without an equation
    StrayEquation,   // equation for a name that is not endogenous
    UnboundVariable, // equation references a name outside U and V
    Cycle,           // dependency cycle among endogenous variables
    BadPreemption,   // preemption pair names an unknown variable
  };
  Kind kind;
  std::string message;
  /// Cycle: the offending path; otherwise the variable names involved.
  std::vector<std::string> subjects;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  std::string to_string() const;
};

/// Checks every structural invariant. Violations are the payload; this
/// function itself never throws.
ValidationReport validate_model(const CausalModel& m);

/// Total assignment of the exogenous variables.
using Context = Assignment;

/// Unique solution of the equations in context `u`, as a total assignment
/// over U and V. Rejects invalid models and non-total contexts.
Assignment evaluate(const CausalModel& m, const Context& u);

/// Returns a copy with each target's equation replaced by the constant.
/// Targets must be distinct endogenous variables.
CausalModel intervene(const CausalModel& m,
                      const std::vector<std::pair<std::string, bool>>& xs);

/// [Y1<-y1, ..., Yk<-yk] phi. Variables of phi stand for "X = 1"; negation
/// encodes "X = 0".
struct CausalFormula {
  std::vector<std::pair<std::string, bool>> interventions;
  Formula phi;
};

/// Whether (m, u) satisfies the causal formula: applies the interventions,
/// solves, then evaluates phi over the resulting assignment.
bool satisfies(const CausalModel& m, const Context& u, const CausalFormula& cf);

/// Endogenous variables in an evaluation order compatible with the
/// dependency graph. Throws ValidationError on cyclic models.
std::vector<std::string> topological_order(const CausalModel& m);

}  // namespace causalfuse

#endif  // CAUSALFUSE_MODEL_HPP_
