#include "causalfuse/json_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "causalfuse/errors.hpp"

namespace causalfuse {

namespace {

void reject_unknown_keys(const Json& doc,
                         const std::vector<std::string>& allowed,
                         const std::string& what) {
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key == "ranges" || key == "values" || key == "domains")
      throw Error("only binary models are supported; variable ranges are "
                  "fixed to {0,1} and may not be declared");
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error("unknown key '" + key + "' in " + what);
  }
}

}  // namespace

std::vector<std::string> json_string_array(const Json& j,
                                           const std::string& what) {
  if (!j.is_array()) throw Error(what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) {
    if (!item.is_string()) throw Error(what + " must contain only strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

bool json_bit(const Json& j, const std::string& what) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    auto v = j.get<long long>();
    if (v == 0 || v == 1) return v == 1;
  }
  throw Error(what + " must be 0 or 1");
}

CausalModel model_from_json(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("model document must be a JSON object");
  reject_unknown_keys(doc,
                      {"name", "exogenous", "endogenous", "equations",
                       "preemptions", "provenance"},
                      "model document");
  for (const char* key : {"exogenous", "endogenous", "equations"})
    if (!doc.contains(key))
      throw Error(std::string("model document is missing '") + key + "'");

  CausalModel m;
  m.name = doc.value("name", std::string());
  m.exogenous = json_string_array(doc["exogenous"], "'exogenous'");
  m.endogenous = json_string_array(doc["endogenous"], "'endogenous'");

  const Json& eqs = doc["equations"];
  if (!eqs.is_object()) throw Error("'equations' must be an object");
  for (const auto& [var, rhs] : eqs.items()) {
    if (!rhs.is_string())
      throw Error("equation of '" + var + "' must be a formula string");
    try {
      m.equations.emplace(var, parse_formula(rhs.get<std::string>()));
    } catch (const ParseError& e) {
      throw Error("equation of '" + var + "': " + e.what());
    }
  }

  if (doc.contains("preemptions")) {
    const Json& pre = doc["preemptions"];
    if (!pre.is_array()) throw Error("'preemptions' must be an array of pairs");
    for (const auto& pair : pre) {
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() ||
          !pair[1].is_string())
        throw Error("each preemption must be a [blocker, blocked] pair");
      m.preemptions.emplace_back(pair[0].get<std::string>(),
                                 pair[1].get<std::string>());
    }
  }

  if (doc.contains("provenance")) {
    const Json& prov = doc["provenance"];
    if (!prov.is_object()) throw Error("'provenance' must be an object");
    for (const auto& [var, tag] : prov.items()) {
      if (!tag.is_string())
        throw Error("provenance of '" + var + "' must be a string tag");
      m.provenance.emplace(var, provenance_from_string(tag.get<std::string>()));
    }
  }
  return m;
}

Json model_to_json(const CausalModel& m) {
  Json doc;
  doc["name"] = m.name;
  doc["exogenous"] = m.exogenous;
  doc["endogenous"] = m.endogenous;
  Json eqs = Json::object();
  for (const auto& var : m.endogenous) {
    auto it = m.equations.find(var);
    if (it != m.equations.end()) eqs[var] = render_formula(it->second);
  }
  doc["equations"] = std::move(eqs);
  Json pre = Json::array();
  for (const auto& [a, b] : m.preemptions) pre.push_back(Json::array({a, b}));
  doc["preemptions"] = std::move(pre);
  Json prov = Json::object();
  for (const auto& var : m.endogenous) {
    auto it = m.provenance.find(var);
    if (it != m.provenance.end()) prov[var] = to_string(it->second);
  }
  doc["provenance"] = std::move(prov);
  return doc;
}

Json assignment_to_json(const Assignment& a) {
  Json out = Json::object();
  for (const auto& [name, value] : a) out[name] = value ? 1 : 0;
  return out;
}

namespace {

Json literals_to_json(const Literals& lits) {
  Json out = Json::array();
  for (const auto& lit : lits) {
    Json entry;
    entry["var"] = lit.var;
    entry["value"] = lit.value ? 1 : 0;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

Json verdict_to_json(const CauseVerdict& v) {
  Json out;
  out["candidate"] = literals_to_json(v.candidate);
  out["effect"] = render_formula(v.effect);
  out["ac1"] = v.ac1 ? 1 : 0;
  out["ac2"] = v.ac2 ? 1 : 0;
  out["ac3"] = v.ac3 ? 1 : 0;
  out["overall"] = v.overall ? 1 : 0;
  if (v.witness.has_value()) {
    Json w;
    w["w"] = v.witness->frozen;
    w["x_prime"] = literals_to_json(v.witness->alternative);
    out["witness"] = std::move(w);
  }
  if (v.ac3_violation.has_value())
    out["ac3_violation"] = literals_to_json(*v.ac3_violation);
  return out;
}

Json report_to_json(const ScenarioReport& report) {
  Json out;
  out["effect"] = render_formula(report.effect);
  out["admissible_contexts"] = report.admissible_count;
  out["free_exogenous"] = report.free_exogenous;
  out["pruned"] = report.pruned;
  Json crossed = Json::array();
  for (const auto& [a, b] : report.preemptions_crossed)
    crossed.push_back(Json::array({a, b}));
  out["preemptions_crossed"] = std::move(crossed);
  Json causes = Json::array();
  for (const auto& cause : report.causes) {
    Json entry;
    entry["candidate"] = literals_to_json(cause.candidate);
    entry["contexts"] = cause.context_ids;
    Json witness;
    witness["w"] = cause.witness.frozen;
    witness["x_prime"] = literals_to_json(cause.witness.alternative);
    entry["witness"] = std::move(witness);
    entry["domains"] = cause.domains;
    causes.push_back(std::move(entry));
  }
  out["causes"] = std::move(causes);
  out["narrative"] = report.narrative;
  return out;
}

std::vector<std::pair<std::string, bool>> parse_bindings(
    const std::string& text) {
  std::vector<std::pair<std::string, bool>> out;
  if (text.empty()) return out;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("binding '" + item + "' is not of the form name=bit");
    std::string name = item.substr(0, eq);
    std::string value = item.substr(eq + 1);
    // Tolerate surrounding whitespace.
    auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.pop_back();
    };
    trim(name);
    trim(value);
    if (!is_valid_identifier(name))
      throw Error("'" + name + "' is not a valid variable name");
    if (value != "0" && value != "1")
      throw Error("value of '" + name + "' must be 0 or 1");
    out.emplace_back(name, value == "1");
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write file '" + path.string() + "'");
  out << content;
}

std::string to_output_string(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace causalfuse
