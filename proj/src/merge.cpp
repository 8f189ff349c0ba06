#include "causalfuse/merge.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "causalfuse/errors.hpp"
#include "causalfuse/hta.hpp"
#include "causalfuse/json_io.hpp"
#include "causalfuse/tree.hpp"

namespace causalfuse {

namespace {

std::string join(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out;
}

bool is_exo_driven_leaf(const CausalModel& m, const std::string& node) {
  auto it = m.equations.find(node);
  if (it == m.equations.end()) return false;
  return it->second == Formula::var(node + "_exo");
}

// Endogenous nodes of `m` that no equation of `m` references.
std::vector<std::string> roots_of(const CausalModel& m) {
  std::set<std::string> referenced;
  for (const auto& [node, eq] : m.equations) {
    (void)node;
    for (const auto& v : formula_vars(eq)) referenced.insert(v);
  }
  std::vector<std::string> roots;
  for (const auto& node : m.endogenous)
    if (!referenced.count(node)) roots.push_back(node);
  return roots;
}

std::string unique_root(const CausalModel& m) {
  std::vector<std::string> roots = roots_of(m);
  if (roots.size() != 1)
    throw Error("model '" + m.name + "' must have exactly one root, found [" +
                join(roots) + "]");
  return roots.front();
}

bool is_root(const CausalModel& m, const std::string& node) {
  for (const auto& [other, eq] : m.equations) {
    (void)other;
    if (formula_vars(eq).count(node)) return false;
  }
  return true;
}

void drop_unreferenced_exo(CausalModel* m, const std::string& name) {
  for (const auto& [node, eq] : m->equations) {
    (void)node;
    if (formula_vars(eq).count(name)) return;
  }
  auto it = std::find(m->exogenous.begin(), m->exogenous.end(), name);
  if (it != m->exogenous.end()) m->exogenous.erase(it);
}

void append_preemptions(
    CausalModel* m,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& pair : pairs)
    if (std::find(m->preemptions.begin(), m->preemptions.end(), pair) ==
        m->preemptions.end())
      m->preemptions.push_back(pair);
}

void check_valid(const CausalModel& m, const char* operation) {
  ValidationReport report = validate_model(m);
  if (!report.ok())
    throw Error(std::string(operation) +
                " produced an invalid model: " + report.to_string());
}

// Union of `extra` into `into`, skipping the `skip` names. Shared names are
// collisions; with `tolerate_identical` (the equate path) an exogenous pair
// or an endogenous pair with structurally identical equations merges
// silently instead.
void merge_into(CausalModel* into, const CausalModel& extra,
                const std::unordered_set<std::string>& skip,
                bool tolerate_identical, const char* operation) {
  std::vector<std::string> clashes;
  for (const auto& name : extra.exogenous) {
    if (skip.count(name)) continue;
    if (into->is_exogenous(name)) {
      if (!tolerate_identical) clashes.push_back(name);
    } else if (into->is_endogenous(name)) {
      clashes.push_back(name);
    } else {
      into->exogenous.push_back(name);
    }
  }
  for (const auto& name : extra.endogenous) {
    if (skip.count(name)) continue;
    if (into->is_exogenous(name)) {
      clashes.push_back(name);
      continue;
    }
    if (into->is_endogenous(name)) {
      if (!tolerate_identical ||
          !(into->equations.at(name) == extra.equations.at(name)))
        clashes.push_back(name);
      continue;
    }
    into->endogenous.push_back(name);
    into->equations.emplace(name, extra.equations.at(name));
    auto prov = extra.provenance.find(name);
    if (prov != extra.provenance.end())
      into->provenance.emplace(name, prov->second);
  }
  if (!clashes.empty())
    throw Error(std::string(operation) + ": name collision on [" +
                join(clashes) + "] (no automatic renaming; resolve the "
                "collision or add an equate entry)");
  append_preemptions(into, extra.preemptions);
}

Formula rename_var(const Formula& f, const std::string& from,
                   const std::string& to) {
  switch (f.kind()) {
    case FormulaKind::Var:
      return f.var_name() == from ? Formula::var(to) : f;
    case FormulaKind::Const:
      return f;
    case FormulaKind::Not:
      return Formula::negation(rename_var(f.operand(), from, to));
    case FormulaKind::And:
      return Formula::conjunction(rename_var(f.lhs(), from, to),
                                  rename_var(f.rhs(), from, to));
    case FormulaKind::Or:
      return Formula::disjunction(rename_var(f.lhs(), from, to),
                                  rename_var(f.rhs(), from, to));
    case FormulaKind::Xor:
      return Formula::exclusive_or(rename_var(f.lhs(), from, to),
                                   rename_var(f.rhs(), from, to));
  }
  throw Error("corrupt formula node");
}

CausalModel rename_node(const CausalModel& m, const std::string& from,
                        const std::string& to) {
  if (m.is_endogenous(to) || m.is_exogenous(to))
    throw Error("cannot rename '" + from + "' to '" + to +
                "': the name is already taken");
  CausalModel out = m;
  std::replace(out.endogenous.begin(), out.endogenous.end(), from, to);
  out.equations.clear();
  for (const auto& [node, eq] : m.equations)
    out.equations.emplace(node == from ? to : node, rename_var(eq, from, to));
  out.provenance.clear();
  for (const auto& [node, tag] : m.provenance)
    out.provenance.emplace(node == from ? to : node, tag);
  for (auto& [a, b] : out.preemptions) {
    if (a == from) a = to;
    if (b == from) b = to;
  }
  return out;
}

}  // namespace

CausalModel submodel(const CausalModel& m, const std::string& node) {
  if (!m.is_endogenous(node))
    throw Error("'" + node + "' is not an endogenous variable of '" + m.name +
                "'");
  std::set<std::string> keep{node};
  std::vector<std::string> stack{node};
  std::set<std::string> keep_exo;
  while (!stack.empty()) {
    std::string current = stack.back();
    stack.pop_back();
    auto it = m.equations.find(current);
    if (it == m.equations.end()) continue;
    for (const auto& v : formula_vars(it->second)) {
      if (m.is_endogenous(v)) {
        if (keep.insert(v).second) stack.push_back(v);
      } else {
        keep_exo.insert(v);
      }
    }
  }

  CausalModel out;
  out.name = node;
  for (const auto& name : m.exogenous)
    if (keep_exo.count(name)) out.exogenous.push_back(name);
  for (const auto& name : m.endogenous)
    if (keep.count(name)) {
      out.endogenous.push_back(name);
      out.equations.emplace(name, m.equations.at(name));
      auto prov = m.provenance.find(name);
      if (prov != m.provenance.end())
        out.provenance.emplace(name, prov->second);
    }
  for (const auto& pair : m.preemptions)
    if (keep.count(pair.first) && keep.count(pair.second))
      out.preemptions.push_back(pair);
  return out;
}

CausalModel refine(const CausalModel& base, const std::string& leaf,
                   const CausalModel& sub) {
  if (!base.is_endogenous(leaf))
    throw Error("refinement leaf '" + leaf + "' is not in the base model");
  if (!is_exo_driven_leaf(base, leaf))
    throw Error("refinement leaf '" + leaf +
                "' must be an exogenous-driven leaf (equation " + leaf +
                " = " + leaf + "_exo)");
  const std::string root = unique_root(sub);
  const std::string driver = leaf + "_exo";
  const bool identify = root == leaf;

  CausalModel out = base;
  if (identify) {
    // Same-name root: the leaf and the root are the same node; the leaf
    // adopts the root's equation and the rest of the sub is unioned in.
    out.equations.at(leaf) = sub.equations.at(root);
    merge_into(&out, sub, {root, driver}, false, "refine");
  } else {
    out.equations.at(leaf) = Formula::var(root);
    merge_into(&out, sub, {}, false, "refine");
  }
  drop_unreferenced_exo(&out, driver);
  check_valid(out, "refine");
  return out;
}

CausalModel equate(const CausalModel& a, const std::string& na,
                   const CausalModel& b, const std::string& nb) {
  if (!a.is_endogenous(na))
    throw Error("equate: '" + na + "' is not an endogenous variable of '" +
                a.name + "'");
  if (!b.is_endogenous(nb))
    throw Error("equate: '" + nb + "' is not an endogenous variable of '" +
                b.name + "'");
  if (!is_root(b, nb))
    throw Error("equate: '" + nb + "' has parents in '" + b.name +
                "'; only root nodes can be equated in");

  CausalModel incoming = nb == na ? b : rename_node(b, nb, na);
  const Formula& incoming_eq = incoming.equations.at(na);

  CausalModel out = a;
  if (is_exo_driven_leaf(out, na)) {
    out.equations.at(na) = incoming_eq;
    drop_unreferenced_exo(&out, na + "_exo");
  } else if (!(out.equations.at(na) == incoming_eq)) {
    throw Error("equate: '" + na +
                "' is defined differently on both sides; supply a rewrite");
  }
  merge_into(&out, incoming, {na}, true, "equate");
  check_valid(out, "equate");
  return out;
}

CausalModel extend(const CausalModel& base, const CausalModel& ext,
                   const GlueSpec& glue) {
  CausalModel incoming = ext;
  std::unordered_set<std::string> equated;
  for (const auto& [base_node, ext_node] : glue.equate) {
    if (!base.is_endogenous(base_node))
      throw Error("extend: equate target '" + base_node +
                  "' is not in the base model");
    if (!incoming.is_endogenous(ext_node))
      throw Error("extend: equate source '" + ext_node +
                  "' is not in the extension model");
    if (!is_root(incoming, ext_node))
      throw Error("extend: equate source '" + ext_node +
                  "' has parents in the extension model");
    if (ext_node != base_node)
      incoming = rename_node(incoming, ext_node, base_node);
    equated.insert(base_node);
  }

  CausalModel out = base;
  for (const auto& node : equated) {
    const Formula& incoming_eq = incoming.equations.at(node);
    if (is_exo_driven_leaf(out, node)) {
      out.equations.at(node) = incoming_eq;
      drop_unreferenced_exo(&out, node + "_exo");
    } else if (!(out.equations.at(node) == incoming_eq)) {
      throw Error("extend: equated node '" + node +
                  "' is defined differently on both sides; supply a rewrite");
    }
  }
  merge_into(&out, incoming, equated, false, "extend");

  for (const auto& added : glue.added_nodes) {
    if (out.is_endogenous(added.name) || out.is_exogenous(added.name))
      throw Error("extend: added node '" + added.name + "' already exists");
    out.endogenous.push_back(added.name);
    out.equations.emplace(added.name, added.equation);
    out.provenance.emplace(added.name, added.provenance);
  }

  for (const auto& rewrite : glue.rewrites) {
    auto it = out.equations.find(rewrite.node);
    if (it == out.equations.end())
      throw Error("extend: rewrite targets unknown node '" + rewrite.node +
                  "'");
    it->second = rewrite.equation;
  }

  append_preemptions(&out, glue.preemptions);
  check_valid(out, "extend");
  return out;
}

namespace {

GlueSpec glue_from_json(const Json& doc) {
  GlueSpec glue;
  if (!doc.is_object()) throw Error("'glue' must be an object");
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "equate" && key != "added_nodes" && key != "rewrites" &&
        key != "preemptions")
      throw Error("unknown key '" + key + "' in glue spec");
  }
  if (doc.contains("equate"))
    for (const auto& pair : doc["equate"])
      glue.equate.emplace_back(pair.at(0).get<std::string>(),
                               pair.at(1).get<std::string>());
  if (doc.contains("added_nodes")) {
    for (const auto& body : doc["added_nodes"]) {
      GlueSpec::AddedNode added;
      added.name = body.at("name").get<std::string>();
      added.equation = parse_formula(body.at("equation").get<std::string>());
      if (body.contains("provenance"))
        added.provenance =
            provenance_from_string(body["provenance"].get<std::string>());
      glue.added_nodes.push_back(std::move(added));
    }
  }
  if (doc.contains("rewrites")) {
    for (const auto& body : doc["rewrites"]) {
      glue.rewrites.push_back(
          {body.at("node").get<std::string>(),
           parse_formula(body.at("equation").get<std::string>())});
    }
  }
  if (doc.contains("preemptions"))
    for (const auto& pair : doc["preemptions"])
      glue.preemptions.emplace_back(pair.at(0).get<std::string>(),
                                    pair.at(1).get<std::string>());
  return glue;
}

}  // namespace

CausalModel run_merge_plan(const std::string& plan_json,
                           const std::filesystem::path& base_dir,
                           Diagnostics* warnings) {
  Json doc;
  try {
    doc = Json::parse(plan_json);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("steps"))
    throw Error("merge plan must be an object with a 'steps' array");

  std::map<std::string, CausalModel> models;
  auto get = [&](const Json& step, const char* key) -> CausalModel& {
    std::string id = step.at(key).get<std::string>();
    auto it = models.find(id);
    if (it == models.end())
      throw Error("merge plan references unknown model id '" + id + "'");
    return it->second;
  };
  auto put = [&](const Json& step, CausalModel model) {
    std::string id = step.at("as").get<std::string>();
    models.insert_or_assign(id, std::move(model));
  };
  auto path_of = [&](const Json& step, const char* key) {
    std::filesystem::path p = step.at(key).get<std::string>();
    return p.is_absolute() ? p : base_dir / p;
  };

  const CausalModel* result = nullptr;
  CausalModel output;
  for (const Json& step : doc["steps"]) {
    std::string op = step.at("op").get<std::string>();
    if (op == "load-model") {
      put(step, model_from_json(read_text_file(path_of(step, "path"))));
    } else if (op == "load-tree") {
      Tree t = parse_tree(read_text_file(path_of(step, "path")));
      put(step, tree_to_causal(t, warnings));
    } else if (op == "load-hta") {
      HtaModel h = parse_hta(read_text_file(path_of(step, "path")));
      InversionSpec spec = inversion_spec_from_json(
          read_text_file(path_of(step, "inversion")));
      put(step, invert_hta(h, spec, warnings));
    } else if (op == "split") {
      put(step, submodel(get(step, "from"), step.at("node").get<std::string>()));
    } else if (op == "refine") {
      put(step, refine(get(step, "base"), step.at("leaf").get<std::string>(),
                       get(step, "sub")));
    } else if (op == "equate") {
      put(step, equate(get(step, "base"), step.at("node").get<std::string>(),
                       get(step, "with"),
                       step.at("incoming").get<std::string>()));
    } else if (op == "extend") {
      GlueSpec glue = step.contains("glue") ? glue_from_json(step["glue"])
                                            : GlueSpec{};
      put(step, extend(get(step, "base"), get(step, "ext"), glue));
    } else if (op == "output") {
      output = get(step, "model");
      if (step.contains("name"))
        output.name = step.at("name").get<std::string>();
      result = &output;
    } else {
      throw Error("unknown merge plan op '" + op + "'");
    }
  }
  if (result == nullptr)
    throw Error("merge plan has no 'output' step");
  return output;
}

}  // namespace causalfuse
