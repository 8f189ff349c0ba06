#include "causalfuse/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "causalfuse/json_io.hpp"
#include "compiled.hpp"

namespace causalfuse {

const char* to_string(EvidenceSource s) {
  switch (s) {
    case EvidenceSource::Sensor:
      return "sensor";
    case EvidenceSource::Log:
      return "log";
    case EvidenceSource::Expert:
      return "expert";
  }
  return "expert";
}

EvidenceSource evidence_source_from_string(const std::string& tag) {
  if (tag == "sensor") return EvidenceSource::Sensor;
  if (tag == "log") return EvidenceSource::Log;
  if (tag == "expert") return EvidenceSource::Expert;
  throw Error("unknown evidence source '" + tag + "'");
}

Evidence evidence_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("evidence document must be a JSON object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "fixed_exogenous" && key != "observations")
      throw Error("unknown key '" + key + "' in evidence document");
  }

  Evidence e;
  if (doc.contains("fixed_exogenous"))
    for (const auto& [name, bit] : doc["fixed_exogenous"].items())
      e.fixed_exogenous.emplace(name, json_bit(bit, "'" + name + "'"));
  if (doc.contains("observations")) {
    for (const auto& body : doc["observations"]) {
      Observation obs;
      obs.node = body.at("node").get<std::string>();
      obs.value = json_bit(body.at("value"), "value of '" + obs.node + "'");
      if (body.contains("source"))
        obs.source =
            evidence_source_from_string(body["source"].get<std::string>());
      if (body.contains("mode")) {
        std::string mode = body["mode"].get<std::string>();
        if (mode == "consistency")
          obs.mode = ObservationMode::Consistency;
        else if (mode == "intervention")
          obs.mode = ObservationMode::Intervention;
        else
          throw Error("observation mode must be 'consistency' or "
                      "'intervention', got '" +
                      mode + "'");
      }
      for (const auto& [key, value] : body.items()) {
        (void)value;
        if (key != "node" && key != "value" && key != "source" && key != "mode")
          throw Error("unknown key '" + key + "' in observation");
      }
      e.observations.push_back(std::move(obs));
    }
  }
  return e;
}

namespace {

constexpr std::size_t kContextCap = std::size_t{1} << 20;

void check_evidence_names(const CausalModel& m, const Evidence& e) {
  for (const auto& [name, value] : e.fixed_exogenous) {
    (void)value;
    if (!m.is_exogenous(name))
      throw Error("fixed_exogenous names '" + name +
                  "', which is not an exogenous variable");
  }
  std::map<std::string, bool> seen;
  for (const auto& obs : e.observations) {
    if (m.is_exogenous(obs.node))
      throw Error("observation targets exogenous '" + obs.node +
                  "'; fix it via fixed_exogenous instead");
    if (!m.is_endogenous(obs.node))
      throw Error("observation targets unknown variable '" + obs.node + "'");
    auto [it, fresh] = seen.emplace(obs.node, obs.value);
    if (!fresh && it->second != obs.value)
      throw EvidenceError("conflicting observations for '" + obs.node + "'");
  }
}

std::string describe_observations(const Evidence& e) {
  std::ostringstream out;
  bool first = true;
  for (const auto& obs : e.observations) {
    if (obs.mode != ObservationMode::Consistency) continue;
    if (!first) out << ", ";
    first = false;
    out << obs.node << "=" << (obs.value ? 1 : 0) << " (" <<
        to_string(obs.source) << ")";
  }
  return out.str();
}

}  // namespace

std::pair<CausalModel, std::vector<Context>> apply_evidence(
    const CausalModel& m, const Evidence& e) {
  check_evidence_names(m, e);

  std::vector<std::pair<std::string, bool>> interventions;
  for (const auto& obs : e.observations)
    if (obs.mode == ObservationMode::Intervention)
      interventions.emplace_back(obs.node, obs.value);
  CausalModel working =
      interventions.empty() ? m : intervene(m, interventions);

  detail::CompiledModel cm(working);
  std::vector<int> free_slots;
  std::vector<std::uint8_t> base(cm.total(), 0);
  for (int s = 0; s < cm.exo_count(); ++s) {
    auto it = e.fixed_exogenous.find(cm.name_of(s));
    if (it == e.fixed_exogenous.end())
      free_slots.push_back(s);
    else
      base[s] = it->second ? 1 : 0;
  }
  if (free_slots.size() >= 8 * sizeof(std::size_t) ||
      (std::size_t{1} << free_slots.size()) > kContextCap)
    throw SearchCapError("too many free exogenous variables to enumerate");

  std::vector<std::pair<int, bool>> consistency;
  for (const auto& obs : e.observations)
    if (obs.mode == ObservationMode::Consistency)
      consistency.emplace_back(cm.slot_of(obs.node), obs.value);

  std::vector<Context> admissible;
  std::size_t total = std::size_t{1} << free_slots.size();
  std::vector<std::uint8_t> values(cm.total(), 0);
  for (std::size_t bits = 0; bits < total; ++bits) {
    std::copy(base.begin(), base.end(), values.begin());
    for (std::size_t i = 0; i < free_slots.size(); ++i)
      values[free_slots[i]] =
          (bits >> (free_slots.size() - 1 - i)) & 1u ? 1 : 0;
    cm.solve(values.data());
    bool ok = true;
    for (const auto& [slot, expected] : consistency)
      if ((values[slot] != 0) != expected) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Context u;
    for (int s = 0; s < cm.exo_count(); ++s)
      u.emplace(cm.name_of(s), values[s] != 0);
    admissible.push_back(std::move(u));
  }

  if (admissible.empty()) {
    std::string detail = describe_observations(e);
    throw EvidenceError(
        "contradictory evidence: no admissible context satisfies {" + detail +
        "} under the fixed exogenous values");
  }
  return {std::move(working), std::move(admissible)};
}

namespace {

// Values of every variable in every admissible context, plus which
// endogenous nodes are fixed across all of them.
struct EvidenceSolutions {
  CausalModel working;
  std::vector<Context> contexts;
  std::vector<Assignment> solutions;
  std::map<std::string, bool> fixed_nodes;  // constant across all contexts
};

EvidenceSolutions solve_evidence(const CausalModel& m, const Evidence& e) {
  EvidenceSolutions out;
  auto [working, contexts] = apply_evidence(m, e);
  out.working = std::move(working);
  out.contexts = std::move(contexts);
  for (const auto& u : out.contexts)
    out.solutions.push_back(evaluate(out.working, u));

  for (const auto& node : out.working.endogenous) {
    bool first = out.solutions.front().at(node);
    bool constant = true;
    for (const auto& solution : out.solutions)
      if (solution.at(node) != first) {
        constant = false;
        break;
      }
    if (constant) out.fixed_nodes.emplace(node, first);
  }
  return out;
}

}  // namespace

std::pair<CausalModel, std::vector<std::string>> prune(const CausalModel& m,
                                                       const Evidence& e) {
  EvidenceSolutions ev = solve_evidence(m, e);

  CausalModel folded = ev.working;
  std::vector<std::string> pruned;
  for (const auto& node : folded.endogenous) {
    auto fixed = ev.fixed_nodes.find(node);
    if (fixed != ev.fixed_nodes.end()) {
      pruned.push_back(node);
      folded.equations.at(node) = Formula::constant(fixed->second);
    } else {
      folded.equations.at(node) =
          substitute_constants(folded.equations.at(node), ev.fixed_nodes);
    }
  }
  return {std::move(folded), std::move(pruned)};
}

ScenarioReport analyze(const CausalModel& m, const Evidence& e,
                       const Formula& effect, const CauseQueryOptions& opts) {
  EvidenceSolutions ev = solve_evidence(m, e);

  for (std::size_t i = 0; i < ev.contexts.size(); ++i) {
    bool holds = eval_formula(effect, ev.solutions[i]);
    if (!holds) {
      std::ostringstream msg;
      msg << "effect not established: '" << render_formula(effect)
          << "' fails in admissible context #" << i;
      throw Error(msg.str());
    }
  }

  ScenarioReport report;
  report.effect = effect;
  report.admissible_count = static_cast<int>(ev.contexts.size());
  for (const auto& name : ev.working.exogenous) {
    bool first = ev.contexts.front().at(name);
    for (const auto& u : ev.contexts)
      if (u.at(name) != first) {
        report.free_exogenous.push_back(name);
        break;
      }
  }

  for (const auto& node : ev.working.endogenous)
    if (ev.fixed_nodes.count(node)) report.pruned.push_back(node);

  // Canonical candidate order: size first, then variable declaration order.
  std::unordered_map<std::string, int> decl_index;
  for (std::size_t i = 0; i < ev.working.endogenous.size(); ++i)
    decl_index.emplace(ev.working.endogenous[i], static_cast<int>(i));
  struct Key {
    std::vector<int> slots;
    std::vector<bool> values;
    bool operator<(const Key& other) const {
      if (slots.size() != other.slots.size())
        return slots.size() < other.slots.size();
      if (slots != other.slots) return slots < other.slots;
      return values < other.values;
    }
  };
  std::map<Key, ScenarioCause> causes;
  for (std::size_t i = 0; i < ev.contexts.size(); ++i) {
    std::vector<CauseVerdict> verdicts =
        enumerate_causes(ev.working, ev.contexts[i], effect, opts);
    for (auto& verdict : verdicts) {
      Key key;
      for (const auto& lit : verdict.candidate) {
        key.slots.push_back(decl_index.at(lit.var));
        key.values.push_back(lit.value);
      }
      auto it = causes.find(key);
      if (it == causes.end()) {
        ScenarioCause cause;
        cause.candidate = verdict.candidate;
        cause.witness = std::move(*verdict.witness);
        cause.context_ids.push_back(static_cast<int>(i));
        std::set<std::string> domains;
        for (const auto& lit : verdict.candidate)
          domains.insert(to_string(ev.working.provenance_of(lit.var)));
        cause.domains.assign(domains.begin(), domains.end());
        causes.emplace(std::move(key), std::move(cause));
      } else {
        it->second.context_ids.push_back(static_cast<int>(i));
      }
    }
  }
  for (auto& [key, cause] : causes) {
    (void)key;
    report.causes.push_back(std::move(cause));
  }

  // Preemption pairs touched by any reported cause or witness.
  std::set<std::string> touched;
  for (const auto& cause : report.causes) {
    for (const auto& lit : cause.candidate) touched.insert(lit.var);
    for (const auto& frozen : cause.witness.frozen) touched.insert(frozen);
  }
  for (const auto& pair : ev.working.preemptions)
    if (touched.count(pair.first) || touched.count(pair.second))
      report.preemptions_crossed.push_back(pair);

  // Narrative: one line per cause, mapping it onto model domains.
  for (const auto& cause : report.causes) {
    std::ostringstream line;
    line << "cause {";
    for (std::size_t i = 0; i < cause.candidate.size(); ++i) {
      if (i > 0) line << ", ";
      line << cause.candidate[i].var << "="
           << (cause.candidate[i].value ? 1 : 0);
    }
    line << "}";
    bool technical = false, human = false;
    for (const auto& domain : cause.domains) {
      technical |= domain == "fault-tree" || domain == "attack-tree";
      human |= domain == "hta";
    }
    if (technical && human)
      line << " spans the technical and human domains";
    else if (technical)
      line << " lies in the technical domain";
    else if (human)
      line << " lies in the human domain";
    else
      line << " comes from expert extensions";
    line << " (";
    for (std::size_t i = 0; i < cause.domains.size(); ++i) {
      if (i > 0) line << ", ";
      line << cause.domains[i];
    }
    line << "), supported by " << cause.context_ids.size() << "/"
         << report.admissible_count << " admissible contexts";
    report.narrative.push_back(line.str());
  }
  return report;
}

}  // namespace causalfuse
