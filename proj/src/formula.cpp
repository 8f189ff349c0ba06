#include "causalfuse/formula.hpp"

#include <cctype>
#include <utility>

#include "causalfuse/errors.hpp"

namespace causalfuse {

struct Formula::Node {
  FormulaKind kind;
  std::string name;                // Var
  bool value = false;              // Const
  std::shared_ptr<const Node> a;   // Not operand / binary lhs
  std::shared_ptr<const Node> b;   // binary rhs
};

Formula::Formula() : Formula(constant(false)) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Var;
  n->name = std::move(name);
  return Formula(n);
}

Formula Formula::constant(bool value) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Const;
  n->value = value;
  return Formula(n);
}

Formula Formula::negation(Formula operand) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->a = std::move(operand.node_);
  return Formula(n);
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::And;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(n);
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Or;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(n);
}

Formula Formula::exclusive_or(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Xor;
  n->a = std::move(lhs.node_);
  n->b = std::move(rhs.node_);
  return Formula(n);
}

FormulaKind Formula::kind() const { return node_->kind; }

const std::string& Formula::var_name() const { return node_->name; }

bool Formula::const_value() const { return node_->value; }

Formula Formula::operand() const { return Formula(node_->a); }

Formula Formula::lhs() const { return Formula(node_->a); }

Formula Formula::rhs() const { return Formula(node_->b); }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Var:
      return a.var_name() == b.var_name();
    case FormulaKind::Const:
      return a.const_value() == b.const_value();
    case FormulaKind::Not:
      return a.operand() == b.operand();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

namespace {

// --- parsing ---------------------------------------------------------------

bool ident_start(char c) {
  return c == '_' || std::isalpha(static_cast<unsigned char>(c));
}

bool ident_char(char c) {
  return c == '_' || std::isalnum(static_cast<unsigned char>(c));
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : text_(text) {}

  Formula parse() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ < text_.size()) {
      char c = text_[pos_];
      if (kOperatorish.find(c) != std::string_view::npos)
        fail(std::string("unknown operator token '") + c + "'");
      fail("unexpected trailing input");
    }
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_xor();
    while (peek() == '|') {
      ++pos_;
      f = Formula::disjunction(std::move(f), parse_xor());
    }
    return f;
  }

  Formula parse_xor() {
    Formula f = parse_and();
    while (peek() == '^') {
      ++pos_;
      f = Formula::exclusive_or(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek() == '&') {
      ++pos_;
      f = Formula::conjunction(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (peek() == '!') {
      ++pos_;
      return Formula::negation(parse_unary());
    }
    return parse_atom();
  }

  Formula parse_atom() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      Formula f = parse_or();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return f;
    }
    if (c == '0' || c == '1') {
      char next = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
      if (ident_char(next)) fail("variable names may not start with a digit");
      ++pos_;
      return Formula::constant(c == '1');
    }
    if (ident_start(c)) {
      std::size_t begin = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      return Formula::var(std::string(text_.substr(begin, pos_ - begin)));
    }
    if (c == '\0') fail("unexpected end of input");
    if (kOperatorish.find(c) != std::string_view::npos)
      fail(std::string("unknown operator token '") + c + "'");
    fail(std::string("unexpected character '") + c + "'");
    return Formula();  // unreachable
  }

  // Returns the next significant character without consuming it, or '\0'.
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(message, line, col);
  }

  static constexpr std::string_view kOperatorish = "+-*/%<>=~";

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Precedence levels used both for parsing and for minimal-paren rendering.
int level_of(FormulaKind k) {
  switch (k) {
    case FormulaKind::Or:
      return 0;
    case FormulaKind::Xor:
      return 1;
    case FormulaKind::And:
      return 2;
    case FormulaKind::Not:
      return 3;
    default:
      return 4;
  }
}

void render_into(const Formula& f, std::string* out, int min_level) {
  int lv = level_of(f.kind());
  bool parens = lv < min_level;
  if (parens) out->push_back('(');
  switch (f.kind()) {
    case FormulaKind::Var:
      out->append(f.var_name());
      break;
    case FormulaKind::Const:
      out->push_back(f.const_value() ? '1' : '0');
      break;
    case FormulaKind::Not:
      out->push_back('!');
      render_into(f.operand(), out, level_of(FormulaKind::Not));
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Xor: {
      const char* op = f.kind() == FormulaKind::And  ? " & "
                       : f.kind() == FormulaKind::Or ? " | "
                                                     : " ^ ";
      // Left operand may share the level (left associativity); the right
      // operand must bind tighter so the tree shape survives a round trip.
      render_into(f.lhs(), out, lv);
      out->append(op);
      render_into(f.rhs(), out, lv + 1);
      break;
    }
  }
  if (parens) out->push_back(')');
}

}  // namespace

Formula parse_formula(std::string_view text) {
  return FormulaParser(text).parse();
}

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, &out, 0);
  return out;
}

bool eval_formula(const Formula& f, const Assignment& a) {
  switch (f.kind()) {
    case FormulaKind::Var: {
      auto it = a.find(f.var_name());
      if (it == a.end())
        throw Error("unbound variable '" + f.var_name() + "'");
      return it->second;
    }
    case FormulaKind::Const:
      return f.const_value();
    case FormulaKind::Not:
      return !eval_formula(f.operand(), a);
    case FormulaKind::And:
      return eval_formula(f.lhs(), a) && eval_formula(f.rhs(), a);
    case FormulaKind::Or:
      return eval_formula(f.lhs(), a) || eval_formula(f.rhs(), a);
    case FormulaKind::Xor:
      return eval_formula(f.lhs(), a) != eval_formula(f.rhs(), a);
  }
  throw Error("corrupt formula node");
}

namespace {

void collect_vars(const Formula& f, std::set<std::string>* out) {
  switch (f.kind()) {
    case FormulaKind::Var:
      out->insert(f.var_name());
      break;
    case FormulaKind::Const:
      break;
    case FormulaKind::Not:
      collect_vars(f.operand(), out);
      break;
    default:
      collect_vars(f.lhs(), out);
      collect_vars(f.rhs(), out);
  }
}

}  // namespace

std::set<std::string> formula_vars(const Formula& f) {
  std::set<std::string> out;
  collect_vars(f, &out);
  return out;
}

Formula substitute_constants(const Formula& f,
                             const std::map<std::string, bool>& fixed) {
  switch (f.kind()) {
    case FormulaKind::Var: {
      auto it = fixed.find(f.var_name());
      return it == fixed.end() ? f : Formula::constant(it->second);
    }
    case FormulaKind::Const:
      return f;
    case FormulaKind::Not: {
      Formula sub = substitute_constants(f.operand(), fixed);
      if (sub.kind() == FormulaKind::Const)
        return Formula::constant(!sub.const_value());
      return Formula::negation(std::move(sub));
    }
    case FormulaKind::And: {
      Formula l = substitute_constants(f.lhs(), fixed);
      Formula r = substitute_constants(f.rhs(), fixed);
      if (l.kind() == FormulaKind::Const)
        return l.const_value() ? r : Formula::constant(false);
      if (r.kind() == FormulaKind::Const)
        return r.const_value() ? l : Formula::constant(false);
      return Formula::conjunction(std::move(l), std::move(r));
    }
    case FormulaKind::Or: {
      Formula l = substitute_constants(f.lhs(), fixed);
      Formula r = substitute_constants(f.rhs(), fixed);
      if (l.kind() == FormulaKind::Const)
        return l.const_value() ? Formula::constant(true) : r;
      if (r.kind() == FormulaKind::Const)
        return r.const_value() ? Formula::constant(true) : l;
      return Formula::disjunction(std::move(l), std::move(r));
    }
    case FormulaKind::Xor: {
      Formula l = substitute_constants(f.lhs(), fixed);
      Formula r = substitute_constants(f.rhs(), fixed);
      if (l.kind() == FormulaKind::Const && r.kind() == FormulaKind::Const)
        return Formula::constant(l.const_value() != r.const_value());
      if (l.kind() == FormulaKind::Const)
        return l.const_value() ? Formula::negation(std::move(r)) : r;
      if (r.kind() == FormulaKind::Const)
        return r.const_value() ? Formula::negation(std::move(l)) : l;
      return Formula::exclusive_or(std::move(l), std::move(r));
    }
  }
  throw Error("corrupt formula node");
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty() || !ident_start(name[0])) return false;
  for (char c : name.substr(1))
    if (!ident_char(c)) return false;
  return true;
}

}  // namespace causalfuse
