// causalfuse: compile fault trees, attack trees and task models into binary
// structural causal models, merge them, and answer actual-causality queries.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "causalfuse/dot.hpp"
#include "causalfuse/errors.hpp"
#include "causalfuse/hp.hpp"
#include "causalfuse/hta.hpp"
#include "causalfuse/json_io.hpp"
#include "causalfuse/merge.hpp"
#include "causalfuse/model.hpp"
#include "causalfuse/scenario.hpp"
#include "causalfuse/tree.hpp"

namespace {

using namespace causalfuse;

struct CommonOptions {
  std::string output;
  std::string format = "json";
};

void emit(const CommonOptions& common, const std::string& text) {
  if (common.output.empty())
    std::cout << text;
  else
    write_text_file(common.output, text);
}

void emit_warnings(const Diagnostics& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

CausalModel load_model(const std::string& path) {
  return model_from_json(read_text_file(path));
}

Context context_from(const std::string& text) {
  Context u;
  for (const auto& [name, value] : parse_bindings(text)) {
    if (u.count(name))
      throw Error("context assigns '" + name + "' twice");
    u.emplace(name, value);
  }
  return u;
}

Literals literals_from(const std::string& text) {
  Literals out;
  for (const auto& [name, value] : parse_bindings(text))
    out.push_back({name, value});
  return out;
}

std::filesystem::path plan_base_dir(const std::string& plan_path) {
  if (const char* env = std::getenv("CAUSALFUSE_FIXTURE_DIR"))
    return std::filesystem::path(env);
  return std::filesystem::path(plan_path).parent_path();
}

std::string report_to_text(const ScenarioReport& report) {
  std::ostringstream out;
  out << "effect: " << render_formula(report.effect) << "\n";
  out << "admissible contexts: " << report.admissible_count << "\n";
  out << "pruned:";
  for (const auto& node : report.pruned) out << " " << node;
  out << "\n";
  for (const auto& line : report.narrative) out << line << "\n";
  return out.str();
}

int run(int argc, char** argv) {
  CLI::App app{"socio-technical causal model toolkit"};
  app.require_subcommand(1);

  CommonOptions common;

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "check a model document's invariants");
  std::string validate_model_path;
  validate_cmd->add_option("--model", validate_model_path)->required();
  validate_cmd->add_option("--output", common.output);
  validate_cmd->add_option("--format", common.format);

  // eval
  auto* eval_cmd =
      app.add_subcommand("eval", "solve the equations in a context");
  std::string eval_model_path, eval_context, eval_intervene;
  eval_cmd->add_option("--model", eval_model_path)->required();
  eval_cmd->add_option("--context", eval_context)->required();
  eval_cmd->add_option("--intervene", eval_intervene);
  eval_cmd->add_option("--output", common.output);
  eval_cmd->add_option("--format", common.format);

  // cause
  auto* cause_cmd = app.add_subcommand(
      "cause", "test one candidate with the modified Halpern-Pearl criteria");
  std::string cause_model_path, cause_context, cause_candidate, cause_effect;
  CauseQueryOptions cause_opts;
  cause_cmd->add_option("--model", cause_model_path)->required();
  cause_cmd->add_option("--context", cause_context)->required();
  cause_cmd->add_option("--candidate", cause_candidate)->required();
  cause_cmd->add_option("--effect", cause_effect)->required();
  cause_cmd->add_flag("--allow-effect-vars", cause_opts.allow_effect_vars);
  cause_cmd->add_option("--max-model-size", cause_opts.max_model_size);
  cause_cmd->add_option("--output", common.output);
  cause_cmd->add_option("--format", common.format);

  // causes
  auto* causes_cmd =
      app.add_subcommand("causes", "enumerate all minimal actual causes");
  std::string causes_model_path, causes_context, causes_effect;
  CauseQueryOptions causes_opts;
  causes_cmd->add_option("--model", causes_model_path)->required();
  causes_cmd->add_option("--context", causes_context)->required();
  causes_cmd->add_option("--effect", causes_effect)->required();
  causes_cmd->add_option("--max-cause-size", causes_opts.max_cause_size);
  causes_cmd->add_flag("--allow-effect-vars", causes_opts.allow_effect_vars);
  causes_cmd->add_option("--max-model-size", causes_opts.max_model_size);
  causes_cmd->add_option("--output", common.output);
  causes_cmd->add_option("--format", common.format);

  // butfor
  auto* butfor_cmd =
      app.add_subcommand("butfor", "test plain counterfactual dependence");
  std::string butfor_model_path, butfor_context, butfor_candidate,
      butfor_effect;
  butfor_cmd->add_option("--model", butfor_model_path)->required();
  butfor_cmd->add_option("--context", butfor_context)->required();
  butfor_cmd->add_option("--candidate", butfor_candidate)->required();
  butfor_cmd->add_option("--effect", butfor_effect)->required();
  butfor_cmd->add_option("--output", common.output);
  butfor_cmd->add_option("--format", common.format);

  // convert-tree
  auto* tree_cmd = app.add_subcommand(
      "convert-tree", "compile a fault or attack tree into a causal model");
  std::string tree_path;
  tree_cmd->add_option("--tree", tree_path)->required();
  tree_cmd->add_option("--output", common.output);

  // convert-hta
  auto* hta_cmd = app.add_subcommand(
      "convert-hta", "invert a goal hierarchy into a failure-oriented model");
  std::string hta_path, inversion_path;
  hta_cmd->add_option("--hta", hta_path)->required();
  hta_cmd->add_option("--inversion", inversion_path)->required();
  hta_cmd->add_option("--output", common.output);

  // merge
  auto* merge_cmd =
      app.add_subcommand("merge", "run a declarative merge plan");
  std::string plan_path;
  merge_cmd->add_option("--plan", plan_path)->required();
  merge_cmd->add_option("--output", common.output);

  // scenario
  auto* scenario_cmd = app.add_subcommand(
      "scenario", "analyze recorded evidence against a model");
  std::string scenario_model_path, scenario_evidence_path, scenario_effect;
  CauseQueryOptions scenario_opts;
  scenario_cmd->add_option("--model", scenario_model_path)->required();
  scenario_cmd->add_option("--evidence", scenario_evidence_path)->required();
  scenario_cmd->add_option("--effect", scenario_effect)->required();
  scenario_cmd->add_option("--max-cause-size", scenario_opts.max_cause_size);
  scenario_cmd->add_option("--max-model-size", scenario_opts.max_model_size);
  scenario_cmd->add_option("--output", common.output);
  scenario_cmd->add_option("--format", common.format);

  // dot
  auto* dot_cmd =
      app.add_subcommand("dot", "export a model as a Graphviz digraph");
  std::string dot_model_path, dot_evidence_path, dot_causes;
  dot_cmd->add_option("--model", dot_model_path)->required();
  dot_cmd->add_option("--evidence", dot_evidence_path,
                      "dash the nodes this evidence prunes");
  dot_cmd->add_option("--causes", dot_causes,
                      "comma-separated nodes to draw with heavy borders");
  dot_cmd->add_option("--output", common.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // --help exits 0, usage mistakes exit 2
  }

  if (app.got_subcommand(validate_cmd)) {
    CausalModel m = load_model(validate_model_path);
    ValidationReport report = validate_model(m);
    if (common.format == "json") {
      Json out;
      out["ok"] = report.ok();
      Json issues = Json::array();
      for (const auto& issue : report.issues) {
        Json entry;
        entry["message"] = issue.message;
        entry["subjects"] = issue.subjects;
        issues.push_back(std::move(entry));
      }
      out["issues"] = std::move(issues);
      emit(common, to_output_string(out));
    } else {
      emit(common, report.to_string() + "\n");
    }
    return report.ok() ? 0 : 1;
  }

  if (app.got_subcommand(eval_cmd)) {
    CausalModel m = load_model(eval_model_path);
    if (!eval_intervene.empty())
      m = intervene(m, parse_bindings(eval_intervene));
    Assignment solved = evaluate(m, context_from(eval_context));
    emit(common, to_output_string(assignment_to_json(solved)));
    return 0;
  }

  if (app.got_subcommand(cause_cmd)) {
    CausalModel m = load_model(cause_model_path);
    CauseVerdict verdict =
        is_actual_cause(m, context_from(cause_context),
                        literals_from(cause_candidate),
                        parse_formula(cause_effect), cause_opts);
    emit(common, to_output_string(verdict_to_json(verdict)));
    return 0;
  }

  if (app.got_subcommand(causes_cmd)) {
    CausalModel m = load_model(causes_model_path);
    std::vector<CauseVerdict> verdicts =
        enumerate_causes(m, context_from(causes_context),
                         parse_formula(causes_effect), causes_opts);
    Json out = Json::array();
    for (const auto& verdict : verdicts)
      out.push_back(verdict_to_json(verdict));
    emit(common, to_output_string(out));
    return 0;
  }

  if (app.got_subcommand(butfor_cmd)) {
    CausalModel m = load_model(butfor_model_path);
    bool result = but_for(m, context_from(butfor_context),
                          literals_from(butfor_candidate),
                          parse_formula(butfor_effect));
    Json out;
    out["but_for"] = result ? 1 : 0;
    emit(common, to_output_string(out));
    return 0;
  }

  if (app.got_subcommand(tree_cmd)) {
    Diagnostics warnings;
    Tree t = parse_tree(read_text_file(tree_path));
    CausalModel m = tree_to_causal(t, &warnings);
    emit_warnings(warnings);
    emit(common, to_output_string(model_to_json(m)));
    return 0;
  }

  if (app.got_subcommand(hta_cmd)) {
    Diagnostics warnings;
    HtaModel h = parse_hta(read_text_file(hta_path));
    InversionSpec spec =
        inversion_spec_from_json(read_text_file(inversion_path));
    CausalModel m = invert_hta(h, spec, &warnings);
    emit_warnings(warnings);
    emit(common, to_output_string(model_to_json(m)));
    return 0;
  }

  if (app.got_subcommand(merge_cmd)) {
    Diagnostics warnings;
    CausalModel merged = run_merge_plan(read_text_file(plan_path),
                                        plan_base_dir(plan_path), &warnings);
    emit_warnings(warnings);
    emit(common, to_output_string(model_to_json(merged)));
    return 0;
  }

  if (app.got_subcommand(scenario_cmd)) {
    CausalModel m = load_model(scenario_model_path);
    Evidence e = evidence_from_json(read_text_file(scenario_evidence_path));
    ScenarioReport report =
        analyze(m, e, parse_formula(scenario_effect), scenario_opts);
    if (common.format == "json")
      emit(common, to_output_string(report_to_json(report)));
    else
      emit(common, report_to_text(report));
    return 0;
  }

  if (app.got_subcommand(dot_cmd)) {
    CausalModel m = load_model(dot_model_path);
    DotHighlights highlights;
    if (!dot_evidence_path.empty()) {
      Evidence e = evidence_from_json(read_text_file(dot_evidence_path));
      auto [folded, pruned] = prune(m, e);
      (void)folded;
      highlights.pruned.insert(pruned.begin(), pruned.end());
    }
    if (!dot_causes.empty()) {
      std::stringstream stream(dot_causes);
      std::string item;
      while (std::getline(stream, item, ','))
        if (!item.empty()) highlights.causes.insert(item);
    }
    emit(common, export_dot(m, highlights));
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const causalfuse::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
