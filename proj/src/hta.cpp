#include "causalfuse/hta.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "causalfuse/json_io.hpp"

namespace causalfuse {

const HtaRule* HtaModel::rule_for(const std::string& goal) const {
  for (const auto& rule : rules)
    if (rule.goal == goal) return &rule;
  return nullptr;
}

namespace {

// Minimal scanner for the rule format. Tracks line/column for errors.
class HtaScanner {
 public:
  explicit HtaScanner(const std::string& text) : text_(text) {}

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  // Consumes `word` if it is the next identifier; does not consume otherwise.
  bool accept_word(const char* word) {
    skip_ws();
    std::size_t len = std::string(word).size();
    if (text_.compare(pos_, len, word) != 0) return false;
    std::size_t after = pos_ + len;
    if (after < text_.size() && ident_char(text_[after])) return false;
    pos_ = after;
    return true;
  }

  void expect_word(const char* word) {
    if (!accept_word(word)) fail(std::string("expected '") + word + "'");
  }

  void expect_symbol(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept_symbol(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) return false;
    ++pos_;
    return true;
  }

  void expect_arrow() {
    skip_ws();
    if (text_.compare(pos_, 3, "-->") != 0) fail("expected '-->'");
    pos_ += 3;
  }

  std::string expect_identifier() {
    skip_ws();
    if (pos_ >= text_.size() || !ident_start(text_[pos_]))
      fail("expected identifier");
    std::size_t begin = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return text_.substr(begin, pos_ - begin);
  }

  // Consumes a balanced parenthesized chunk and returns its inside.
  std::string expect_parenthesized() {
    expect_symbol('(');
    std::size_t begin = pos_;
    int depth = 1;
    while (pos_ < text_.size() && depth > 0) {
      if (text_[pos_] == '(') ++depth;
      if (text_[pos_] == ')') --depth;
      ++pos_;
    }
    if (depth != 0) fail("unbalanced '('");
    return text_.substr(begin, pos_ - begin - 1);
  }

  [[noreturn]] void fail(const std::string& message) {
    auto [line, col] = position();
    throw ParseError(message, line, col);
  }

  std::pair<std::size_t, std::size_t> position() const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

 private:
  static bool ident_start(char c) {
    return c == '_' || std::isalpha(static_cast<unsigned char>(c));
  }
  static bool ident_char(char c) {
    return c == '_' || std::isalnum(static_cast<unsigned char>(c));
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

void note_goal(HtaModel* model, std::unordered_set<std::string>* seen,
               const std::string& goal) {
  if (seen->insert(goal).second) model->goals.push_back(goal);
}

std::vector<std::string> find_goal_cycle(const HtaModel& m) {
  enum { White, Grey, Black };
  std::unordered_map<std::string, int> color;
  std::vector<std::string> path;
  std::vector<std::string> cycle;
  struct Frame {
    std::string goal;
    std::size_t next = 0;
  };
  for (const auto& start : m.goals) {
    if (color[start] != White || !cycle.empty()) continue;
    std::vector<Frame> stack{{start}};
    color[start] = Grey;
    path.push_back(start);
    while (!stack.empty() && cycle.empty()) {
      Frame& frame = stack.back();
      const HtaRule* rule = m.rule_for(frame.goal);
      std::size_t fanout = rule ? rule->subgoals.size() : 0;
      if (frame.next < fanout) {
        const std::string& next = rule->subgoals[frame.next++];
        if (color[next] == Grey) {
          auto begin = std::find(path.begin(), path.end(), next);
          cycle.assign(begin, path.end());
        } else if (color[next] == White) {
          color[next] = Grey;
          path.push_back(next);
          stack.push_back({next});
        }
      } else {
        color[frame.goal] = Black;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return cycle;
}

}  // namespace

HtaModel parse_hta(const std::string& text) {
  HtaScanner scan(text);
  HtaModel model;
  std::unordered_set<std::string> seen_goals;
  std::unordered_set<std::string> ruled;

  while (!scan.at_end()) {
    scan.expect_word("rule");
    scan.expect_symbol('(');
    scan.expect_word("goal");
    scan.expect_symbol('=');
    HtaRule rule;
    rule.goal = scan.expect_identifier();
    scan.expect_symbol(')');
    scan.expect_symbol('{');
    if (scan.accept_word("Condition")) {
      std::string expr = scan.expect_parenthesized();
      try {
        rule.condition = parse_formula(expr);
      } catch (const ParseError& e) {
        scan.fail(std::string("bad condition: ") + e.what());
      }
    }
    scan.expect_arrow();
    while (scan.accept_word("Goal")) {
      scan.expect_symbol('(');
      rule.subgoals.push_back(scan.expect_identifier());
      scan.expect_symbol(')');
    }
    scan.expect_symbol('}');

    if (!ruled.insert(rule.goal).second)
      throw Error("duplicate rule for goal '" + rule.goal + "'");
    note_goal(&model, &seen_goals, rule.goal);
    for (const auto& sub : rule.subgoals)
      note_goal(&model, &seen_goals, sub);
    model.rules.push_back(std::move(rule));
  }

  if (model.goals.empty()) throw Error("HTA document declares no rules");

  std::vector<std::string> cycle = find_goal_cycle(model);
  if (!cycle.empty()) {
    std::string msg = "goal cycle [";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      if (i > 0) msg += ", ";
      msg += cycle[i];
    }
    throw Error(msg + "]");
  }

  std::unordered_set<std::string> is_subgoal;
  for (const auto& rule : model.rules)
    for (const auto& sub : rule.subgoals) is_subgoal.insert(sub);
  std::vector<std::string> tops;
  for (const auto& goal : model.goals)
    if (!is_subgoal.count(goal)) tops.push_back(goal);
  if (tops.size() != 1) {
    std::string msg = "expected exactly one top-level goal, found: ";
    for (std::size_t i = 0; i < tops.size(); ++i) {
      if (i > 0) msg += ", ";
      msg += tops[i];
    }
    throw Error(msg);
  }
  model.top = tops.front();
  return model;
}

namespace {

FailureCombinator combinator_from_string(const std::string& tag) {
  if (tag == "AND") return FailureCombinator::And;
  if (tag == "OR") return FailureCombinator::Or;
  throw Error("combinator must be 'AND' or 'OR', got '" + tag + "'");
}

}  // namespace

InversionSpec inversion_spec_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw Error("inversion spec must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    static const char* allowed[] = {"failure_name", "positive_keep",
                                    "combinator",   "operands",
                                    "guards",       "targets"};
    if (std::find_if(std::begin(allowed), std::end(allowed),
                     [&](const char* a) { return key == a; }) ==
        std::end(allowed))
      throw Error("unknown key '" + key + "' in inversion spec");
  }

  InversionSpec spec;
  if (doc.contains("failure_name"))
    for (const auto& [goal, name] : doc["failure_name"].items())
      spec.failure_name.emplace(goal, name.get<std::string>());
  if (doc.contains("positive_keep"))
    for (const auto& [goal, name] : doc["positive_keep"].items())
      spec.positive_keep.emplace(goal, name.get<std::string>());
  if (doc.contains("combinator"))
    for (const auto& [node, tag] : doc["combinator"].items())
      spec.combinator.emplace(node,
                              combinator_from_string(tag.get<std::string>()));
  if (doc.contains("operands"))
    for (const auto& [node, list] : doc["operands"].items())
      spec.operands.emplace(
          node, json_string_array(list, "operands of '" + node + "'"));
  if (doc.contains("guards")) {
    for (const auto& pair : doc["guards"]) {
      if (!pair.is_array() || pair.size() != 2)
        throw Error("each guard must be a [node, guard-variable] pair");
      spec.guards.emplace_back(pair[0].get<std::string>(),
                               pair[1].get<std::string>());
    }
  }
  if (doc.contains("targets")) {
    for (const auto& body : doc["targets"]) {
      InversionTarget target;
      target.name = body.at("name").get<std::string>();
      target.operands = json_string_array(
          body.at("operands"), "operands of target '" + target.name + "'");
      if (body.contains("combinator"))
        target.combinator =
            combinator_from_string(body["combinator"].get<std::string>());
      spec.targets.push_back(std::move(target));
    }
  }
  return spec;
}

namespace {

Formula combine(const std::vector<std::string>& operands,
                FailureCombinator comb) {
  Formula f = Formula::var(operands.front());
  for (std::size_t i = 1; i < operands.size(); ++i) {
    Formula next = Formula::var(operands[i]);
    f = comb == FailureCombinator::And
            ? Formula::conjunction(std::move(f), std::move(next))
            : Formula::disjunction(std::move(f), std::move(next));
  }
  return f;
}

}  // namespace

CausalModel invert_hta(const HtaModel& h, const InversionSpec& spec,
                       Diagnostics* warnings) {
  // Reachable goals in DFS preorder, following rule order.
  std::vector<std::string> goal_order;
  {
    std::unordered_set<std::string> visited;
    struct Frame {
      std::string goal;
      std::size_t next = 0;
    };
    std::vector<Frame> frames{{h.top}};
    visited.insert(h.top);
    goal_order.push_back(h.top);
    while (!frames.empty()) {
      Frame& frame = frames.back();
      const HtaRule* rule = h.rule_for(frame.goal);
      std::size_t fanout = rule ? rule->subgoals.size() : 0;
      if (frame.next < fanout) {
        const std::string& next = rule->subgoals[frame.next++];
        if (visited.insert(next).second) {
          goal_order.push_back(next);
          frames.push_back({next});
        }
      } else {
        frames.pop_back();
      }
    }
  }

  // Output node per goal: kept goals keep their positive name, everything
  // else needs a failure name.
  std::map<std::string, std::string> output_name;
  for (const auto& goal : goal_order) {
    auto kept = spec.positive_keep.find(goal);
    if (kept != spec.positive_keep.end()) {
      output_name[goal] = kept->second;
      continue;
    }
    auto failure = spec.failure_name.find(goal);
    if (failure == spec.failure_name.end())
      throw Error("goal '" + goal +
                  "' is neither mapped to a failure name nor kept positive");
    output_name[goal] = failure->second;
  }

  // Node list: top output first, then targets, then the remaining goal
  // outputs in DFS preorder.
  const std::string top_node = output_name.at(h.top);
  std::vector<std::string> node_order{top_node};
  std::unordered_set<std::string> node_set{top_node};
  for (const auto& target : spec.targets) {
    if (!node_set.insert(target.name).second)
      throw Error("target '" + target.name + "' collides with another node");
    node_order.push_back(target.name);
  }
  for (const auto& goal : goal_order) {
    const std::string& node = output_name.at(goal);
    if (goal == h.top) continue;
    if (!node_set.insert(node).second)
      throw Error("node name '" + node + "' is produced twice");
    node_order.push_back(node);
  }

  auto resolve = [&](const std::string& name, const std::string& context) {
    if (!node_set.count(name))
      throw Error(context + " references unknown node '" + name + "'");
  };

  CausalModel m;
  m.name = top_node;
  m.endogenous = node_order;
  for (const auto& node : node_order) m.provenance.emplace(node, Provenance::Hta);

  auto combinator_for = [&](const std::string& node, std::size_t arity) {
    auto it = spec.combinator.find(node);
    if (it != spec.combinator.end()) return it->second;
    if (arity > 1)
      throw Error("node '" + node +
                  "' has several operands but no combinator entry");
    return FailureCombinator::And;
  };

  // Structural equations for goal outputs.
  for (const auto& goal : goal_order) {
    const std::string& node = output_name.at(goal);
    std::vector<std::string> ops;
    if (goal == h.top && !spec.targets.empty()) {
      for (const auto& target : spec.targets) ops.push_back(target.name);
      auto it = spec.combinator.find(node);
      FailureCombinator comb =
          it != spec.combinator.end() ? it->second : FailureCombinator::Or;
      m.equations.emplace(node, combine(ops, comb));
      continue;
    }
    auto override_it = spec.operands.find(node);
    if (override_it != spec.operands.end()) {
      ops = override_it->second;
      for (const auto& op : ops) resolve(op, "operand override of '" + node + "'");
    } else if (const HtaRule* rule = h.rule_for(goal)) {
      for (const auto& sub : rule->subgoals) ops.push_back(output_name.at(sub));
    }
    if (ops.empty()) {
      std::string driver = node + "_exo";
      m.exogenous.push_back(driver);
      m.equations.emplace(node, Formula::var(driver));
    } else {
      m.equations.emplace(node, combine(ops, combinator_for(node, ops.size())));
    }
  }

  // Target equations.
  for (const auto& target : spec.targets) {
    if (target.operands.empty())
      throw Error("target '" + target.name + "' has no operands");
    for (const auto& op : target.operands)
      resolve(op, "target '" + target.name + "'");
    m.equations.emplace(target.name,
                        combine(target.operands, target.combinator));
  }

  // Guards: negated conjuncts plus preemption annotations.
  for (const auto& [node, guard] : spec.guards) {
    resolve(node, "guard of '" + node + "'");
    resolve(guard, "guard variable of '" + node + "'");
    auto it = m.equations.find(node);
    it->second = Formula::conjunction(it->second,
                                      Formula::negation(Formula::var(guard)));
    m.preemptions.emplace_back(guard, node);
  }

  ValidationReport report = validate_model(m);
  if (!report.ok())
    throw Error("inverted model is invalid: " + report.to_string());

  // Degenerate effects (constant in every context) can only be produced
  // under interventions; surface that instead of repairing the equations.
  if (warnings != nullptr && m.exogenous.size() <= 12) {
    std::vector<std::string> checked;
    for (const auto& target : spec.targets) checked.push_back(target.name);
    if (checked.empty()) checked.push_back(top_node);
    std::size_t total = std::size_t{1} << m.exogenous.size();
    std::map<std::string, std::pair<bool, bool>> seen;  // node -> saw {0, 1}
    for (std::size_t bits = 0; bits < total; ++bits) {
      Context u;
      for (std::size_t i = 0; i < m.exogenous.size(); ++i)
        u[m.exogenous[i]] = ((bits >> i) & 1u) != 0;
      Assignment solved = evaluate(m, u);
      for (const auto& node : checked) {
        auto& flags = seen[node];
        (solved.at(node) ? flags.second : flags.first) = true;
      }
    }
    for (const auto& node : checked) {
      const auto& flags = seen[node];
      if (!flags.second)
        warn(warnings, "node '" + node +
                           "' evaluates to 0 in every context; it can only "
                           "hold under interventions");
      else if (!flags.first)
        warn(warnings, "node '" + node +
                           "' evaluates to 1 in every context; it cannot be "
                           "prevented without interventions");
    }
  }

  return m;
}

}  // namespace causalfuse
