#include "causalfuse/model.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "compiled.hpp"

namespace causalfuse {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::FaultTree:
      return "fault-tree";
    case Provenance::AttackTree:
      return "attack-tree";
    case Provenance::Hta:
      return "hta";
    case Provenance::Expert:
      return "expert";
  }
  return "expert";
}

Provenance provenance_from_string(const std::string& tag) {
  if (tag == "fault-tree") return Provenance::FaultTree;
  if (tag == "attack-tree") return Provenance::AttackTree;
  if (tag == "hta") return Provenance::Hta;
  if (tag == "expert") return Provenance::Expert;
  throw Error("unknown provenance tag '" + tag + "'");
}

bool CausalModel::is_exogenous(const std::string& n) const {
  return std::find(exogenous.begin(), exogenous.end(), n) != exogenous.end();
}

bool CausalModel::is_endogenous(const std::string& n) const {
  return std::find(endogenous.begin(), endogenous.end(), n) != endogenous.end();
}

Provenance CausalModel::provenance_of(const std::string& n) const {
  auto it = provenance.find(n);
  return it == provenance.end() ? Provenance::Expert : it->second;
}

std::string ValidationReport::to_string() const {
  if (issues.empty()) return "ok";
  std::ostringstream out;
  for (std::size_t i = 0; i < issues.size(); ++i) {
    if (i > 0) out << "; ";
    out << issues[i].message;
  }
  return out.str();
}

namespace {

void add_issue(ValidationReport* report, ValidationIssue::Kind kind,
               std::string message, std::vector<std::string> subjects) {
  report->issues.push_back({kind, std::move(message), std::move(subjects)});
}

// Finds one concrete cycle among the endogenous dependencies, as a witness
// path [a, b, ..., z] with z depending on a.
std::vector<std::string> find_cycle(
    const std::vector<std::string>& nodes,
    const std::unordered_map<std::string, std::vector<std::string>>& deps) {
  enum { White, Grey, Black };
  std::unordered_map<std::string, int> color;
  for (const auto& n : nodes) color[n] = White;
  std::vector<std::string> path;
  std::vector<std::string> cycle;

  // Iterative DFS; `path` mirrors the grey chain.
  struct Frame {
    std::string node;
    std::size_t next = 0;
  };
  for (const auto& start : nodes) {
    if (color[start] != White || !cycle.empty()) continue;
    std::vector<Frame> stack{{start}};
    color[start] = Grey;
    path.push_back(start);
    while (!stack.empty() && cycle.empty()) {
      Frame& frame = stack.back();
      const auto& out = deps.at(frame.node);
      if (frame.next < out.size()) {
        const std::string& next = out[frame.next++];
        auto it = color.find(next);
        if (it == color.end()) continue;  // unbound elsewhere; reported there
        if (it->second == Grey) {
          auto begin = std::find(path.begin(), path.end(), next);
          cycle.assign(begin, path.end());
        } else if (it->second == White) {
          it->second = Grey;
          path.push_back(next);
          stack.push_back({next});
        }
      } else {
        color[frame.node] = Black;
        path.pop_back();
        stack.pop_back();
      }
    }
  }
  return cycle;
}

std::string join(const std::vector<std::string>& names, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += sep;
    out += names[i];
  }
  return out;
}

}  // namespace

ValidationReport validate_model(const CausalModel& m) {
  ValidationReport report;

  for (const auto& n : m.exogenous)
    if (!is_valid_identifier(n))
      add_issue(&report, ValidationIssue::Kind::BadName,
                "invalid exogenous name '" + n + "'", {n});
  for (const auto& n : m.endogenous)
    if (!is_valid_identifier(n))
      add_issue(&report, ValidationIssue::Kind::BadName,
                "invalid endogenous name '" + n + "'", {n});

  std::unordered_set<std::string> exo(m.exogenous.begin(), m.exogenous.end());
  std::unordered_set<std::string> endo(m.endogenous.begin(),
                                       m.endogenous.end());
  if (exo.size() != m.exogenous.size())
    add_issue(&report, ValidationIssue::Kind::DuplicateName,
              "duplicate exogenous name", {});
  if (endo.size() != m.endogenous.size())
    add_issue(&report, ValidationIssue::Kind::DuplicateName,
              "duplicate endogenous name", {});
  for (const auto& n : m.exogenous)
    if (endo.count(n))
      add_issue(&report, ValidationIssue::Kind::DuplicateName,
                "'" + n + "' is both exogenous and endogenous", {n});

  for (const auto& n : m.endogenous)
    if (!m.equations.count(n))
      add_issue(&report, ValidationIssue::Kind::MissingEquation,
                "no equation for endogenous variable '" + n + "'", {n});
  for (const auto& [n, f] : m.equations)
    if (!endo.count(n))
      add_issue(&report, ValidationIssue::Kind::StrayEquation,
                "equation for '" + n + "', which is not endogenous", {n});

  // Closure: equations may only mention U and V.
  std::unordered_map<std::string, std::vector<std::string>> deps;
  for (const auto& n : m.endogenous) {
    auto it = m.equations.find(n);
    if (it == m.equations.end()) {
      deps[n] = {};
      continue;
    }
    std::vector<std::string> local;
    for (const auto& v : formula_vars(it->second)) {
      if (!exo.count(v) && !endo.count(v))
        add_issue(&report, ValidationIssue::Kind::UnboundVariable,
                  "equation of '" + n + "' references unbound '" + v + "'",
                  {n, v});
      if (endo.count(v)) local.push_back(v);
    }
    deps[n] = std::move(local);
  }

  std::vector<std::string> cycle = find_cycle(m.endogenous, deps);
  if (!cycle.empty())
    add_issue(&report, ValidationIssue::Kind::Cycle,
              "dependency cycle [" + join(cycle, ", ") + "]", cycle);

  for (const auto& [a, b] : m.preemptions) {
    for (const auto& n : {a, b})
      if (!exo.count(n) && !endo.count(n))
        add_issue(&report, ValidationIssue::Kind::BadPreemption,
                  "preemption pair names unknown variable '" + n + "'", {n});
  }

  return report;
}

std::vector<std::string> topological_order(const CausalModel& m) {
  detail::CompiledModel cm(m);
  std::vector<std::string> order;
  order.reserve(cm.endo_count());
  for (int slot : cm.topo_order()) order.push_back(cm.name_of(slot));
  return order;
}

namespace {

void load_context(const detail::CompiledModel& cm, const Context& u,
                  std::uint8_t* values) {
  if (static_cast<int>(u.size()) != cm.exo_count()) {
    std::ostringstream msg;
    msg << "context must assign exactly the " << cm.exo_count()
        << " exogenous variables, got " << u.size();
    throw Error(msg.str());
  }
  for (const auto& [name, value] : u) {
    int slot = cm.slot_of(name);
    if (slot < 0 || cm.is_endo_slot(slot))
      throw Error("context assigns '" + name +
                  "', which is not an exogenous variable");
    values[slot] = value ? 1 : 0;
  }
}

Assignment read_out(const detail::CompiledModel& cm,
                    const std::uint8_t* values) {
  Assignment out;
  for (int i = 0; i < cm.total(); ++i)
    out.emplace(cm.name_of(i), values[i] != 0);
  return out;
}

void check_targets(const CausalModel& m,
                   const std::vector<std::pair<std::string, bool>>& xs) {
  std::unordered_set<std::string> seen;
  for (const auto& [name, value] : xs) {
    (void)value;
    if (m.is_exogenous(name))
      throw Error("cannot intervene on exogenous variable '" + name + "'");
    if (!m.is_endogenous(name))
      throw Error("cannot intervene on unknown variable '" + name + "'");
    if (!seen.insert(name).second)
      throw Error("duplicate intervention target '" + name + "'");
  }
}

}  // namespace

Assignment evaluate(const CausalModel& m, const Context& u) {
  detail::CompiledModel cm(m);
  std::vector<std::uint8_t> values(cm.total(), 0);
  load_context(cm, u, values.data());
  cm.solve(values.data());
  return read_out(cm, values.data());
}

CausalModel intervene(const CausalModel& m,
                      const std::vector<std::pair<std::string, bool>>& xs) {
  check_targets(m, xs);
  CausalModel out = m;
  for (const auto& [name, value] : xs)
    out.equations[name] = Formula::constant(value);
  return out;
}

bool satisfies(const CausalModel& m, const Context& u,
               const CausalFormula& cf) {
  check_targets(m, cf.interventions);
  detail::CompiledModel cm(m);
  detail::CompiledFormula phi = cm.compile(cf.phi);
  std::vector<std::uint8_t> values(cm.total(), 0);
  std::vector<std::int8_t> clamps(cm.total(), -1);
  load_context(cm, u, values.data());
  for (const auto& [name, value] : cf.interventions)
    clamps[cm.slot_of(name)] = value ? 1 : 0;
  cm.solve(values.data(), clamps.data());
  return phi.eval(values.data());
}

}  // namespace causalfuse
