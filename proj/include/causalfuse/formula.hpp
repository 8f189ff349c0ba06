#ifndef CAUSALFUSE_FORMULA_HPP_
#define CAUSALFUSE_FORMULA_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace causalfuse {

/// Total or partial valuation of named binary variables.
using Assignment = std::map<std::string, bool>;

enum class FormulaKind { Var, Const, Not, And, Or, Xor };

/// Immutable boolean-formula AST over named variables. Structural equations
/// and effect formulas are values of this type; copies share nodes and are
/// safe for concurrent reads.
class Formula {
 public:
  /// Default-constructs the constant 0.
  Formula();

  static Formula var(std::string name);
  static Formula constant(bool value);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula exclusive_or(Formula lhs, Formula rhs);

  FormulaKind kind() const;
  const std::string& var_name() const;  ///< Var nodes only.
  bool const_value() const;             ///< Const nodes only.
  Formula operand() const;              ///< Not nodes only.
  Formula lhs() const;                  ///< Binary nodes only.
  Formula rhs() const;                  ///< Binary nodes only.

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) {
    return !(a == b);
  }

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Parses the textual grammar. Operators `! & ^ |` with that precedence
/// (tightest first), parentheses, constants `0`/`1`, variable names matching
/// [A-Za-z_][A-Za-z0-9_]*. Throws ParseError with position on bad input.
Formula parse_formula(std::string_view text);

/// Renders with the minimal parentheses needed so that
/// parse_formula(render_formula(f)) reproduces f exactly.
std::string render_formula(const Formula& f);

/// Standard boolean semantics. Every variable of `f` must be bound in `a`;
/// an unbound variable raises Error naming it.
bool eval_formula(const Formula& f, const Assignment& a);

/// Exact set of variable names occurring in `f`.
std::set<std::string> formula_vars(const Formula& f);

/// Replaces the given variables by constants and folds constants through
/// connectives. No other rewriting is performed.
Formula substitute_constants(const Formula& f,
                             const std::map<std::string, bool>& fixed);

bool is_valid_identifier(std::string_view name);

}  // namespace causalfuse

#endif  // CAUSALFUSE_FORMULA_HPP_
