#ifndef CAUSALFUSE_TESTS_NORMALIZE_HPP_
#define CAUSALFUSE_TESTS_NORMALIZE_HPP_

// Order-insensitive comparison key for formulas: associative chains of one
// connective are flattened and their operands sorted, so "a | b" and "b | a"
// normalize identically while semantics-changing differences do not.

#include <algorithm>
#include <string>
#include <vector>

#include "causalfuse/formula.hpp"

namespace causalfuse::testing {

inline void flatten(const Formula& f, FormulaKind kind,
                    std::vector<Formula>* out) {
  if (f.kind() == kind) {
    flatten(f.lhs(), kind, out);
    flatten(f.rhs(), kind, out);
  } else {
    out->push_back(f);
  }
}

inline std::string normal_key(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Var:
      return f.var_name();
    case FormulaKind::Const:
      return f.const_value() ? "1" : "0";
    case FormulaKind::Not:
      return "!(" + normal_key(f.operand()) + ")";
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Xor: {
      const char* tag = f.kind() == FormulaKind::And  ? "&"
                        : f.kind() == FormulaKind::Or ? "|"
                                                      : "^";
      std::vector<Formula> operands;
      flatten(f, f.kind(), &operands);
      std::vector<std::string> keys;
      for (const auto& op : operands) keys.push_back(normal_key(op));
      std::sort(keys.begin(), keys.end());
      std::string out = std::string(tag) + "(";
      for (std::size_t i = 0; i < keys.size(); ++i) {
        if (i > 0) out += ",";
        out += keys[i];
      }
      return out + ")";
    }
  }
  return "?";
}

inline std::string normal_key(const std::string& formula_text) {
  return normal_key(parse_formula(formula_text));
}

}  // namespace causalfuse::testing

#endif  // CAUSALFUSE_TESTS_NORMALIZE_HPP_
