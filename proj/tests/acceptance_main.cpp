// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Exercises the bundled automotive fixtures end to end.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "causalfuse/dot.hpp"
#include "causalfuse/hp.hpp"
#include "causalfuse/json_io.hpp"
#include "causalfuse/merge.hpp"
#include "causalfuse/model.hpp"
#include "causalfuse/scenario.hpp"
#include "causalfuse/tree.hpp"
#include "support/generators.hpp"
#include "support/naive_hp.hpp"
#include "support/normalize.hpp"

using namespace causalfuse;
namespace ct = causalfuse::testing;

namespace {

int failures = 0;
std::vector<std::string> details;

void expect(bool condition, const std::string& what) {
  if (!condition) details.push_back(what);
}

std::string fixture_path(const std::string& name) {
  return std::string(CAUSALFUSE_FIXTURES) + "/" + name;
}

std::string fixture(const std::string& name) {
  return read_text_file(fixture_path(name));
}

void run_criterion(int number, const std::string& title, double budget_seconds,
                   const std::function<void()>& body) {
  details.clear();
  auto start = std::chrono::steady_clock::now();
  try {
    body();
  } catch (const std::exception& e) {
    details.push_back(std::string("exception: ") + e.what());
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (budget_seconds > 0 && elapsed > budget_seconds) {
    std::ostringstream msg;
    msg << "took " << elapsed << "s, budget " << budget_seconds << "s";
    details.push_back(msg.str());
  }
  bool ok = details.empty();
  failures += ok ? 0 : 1;
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": "
       << title << " (" << elapsed << "s)";
  std::cout << line.str() << "\n";
  for (const auto& d : details) std::cout << "       - " << d << "\n";
}

CausalModel rock_model() { return model_from_json(fixture("rock.json")); }

Context rock_context(bool suzy, bool billy) {
  return {{"ST_exo", suzy}, {"BT_exo", billy}};
}

// --- criterion 1 -----------------------------------------------------------

void criterion_rock_throwing() {
  CausalModel m = rock_model();
  Context u = rock_context(true, true);
  Formula effect = parse_formula("BS");

  CauseVerdict suzy = is_actual_cause(m, u, {{"ST", true}}, effect);
  expect(suzy.overall, "{ST=1} must be an actual cause of BS=1");
  expect(suzy.ac3, "{ST=1} must be minimal");
  expect(suzy.witness.has_value() &&
             suzy.witness->frozen == std::vector<std::string>{"BH"},
         "witness set must be {BH}");
  expect(suzy.witness.has_value() &&
             suzy.witness->alternative == Literals{{"ST", false}},
         "alternative setting must be ST=0");

  CauseVerdict billy = is_actual_cause(m, u, {{"BT", true}}, effect);
  expect(!billy.overall && !billy.ac2, "{BT=1} must not be a cause");

  expect(!but_for(m, u, {{"ST", true}}, effect),
         "but-for must fail for {ST=1}");
  expect(!but_for(m, u, {{"BT", true}}, effect),
         "but-for must fail for {BT=1}");
}

// --- criterion 2 -----------------------------------------------------------

void criterion_tree_transform_oracle() {
  std::mt19937 rng(424242);
  for (int round = 0; round < 100; ++round) {
    std::uniform_int_distribution<int> leaves_dist(1, 12);
    int leaves = leaves_dist(rng);
    Tree t = ct::random_tree(&rng, leaves, /*allow_xor=*/true);
    CausalModel m = tree_to_causal(t);
    std::size_t total = std::size_t{1} << leaves;
    for (std::size_t bits = 0; bits < total; ++bits) {
      Context u;
      std::map<std::string, bool> leaf_values;
      for (int i = 0; i < leaves; ++i) {
        bool value = ((bits >> i) & 1u) != 0;
        leaf_values.emplace("leaf" + std::to_string(i), value);
        u.emplace("leaf" + std::to_string(i) + "_exo", value);
      }
      bool via_model = evaluate(m, u).at(t.root);
      bool via_tree = ct::eval_tree(t, t.root, leaf_values);
      if (via_model != via_tree) {
        expect(false, "tree " + std::to_string(round) + " assignment " +
                          std::to_string(bits) + ": model and tree disagree");
        return;
      }
    }
  }
}

// --- criterion 3 -----------------------------------------------------------

void criterion_integrated_equations() {
  CausalModel got =
      run_merge_plan(fixture("integrated.plan.json"), CAUSALFUSE_FIXTURES);
  CausalModel want = model_from_json(fixture("integrated_model.json"));

  expect(got.exogenous == want.exogenous, "exogenous sets must match");
  expect(got.endogenous == want.endogenous, "endogenous sets must match");
  int compared = 0;
  for (const auto& node : want.endogenous) {
    auto it = got.equations.find(node);
    if (it == got.equations.end()) {
      expect(false, "missing equation for " + node);
      continue;
    }
    ++compared;
    if (ct::normal_key(it->second) != ct::normal_key(want.equations.at(node)))
      expect(false, "equation mismatch at " + node + ": got '" +
                        render_formula(it->second) + "'");
  }
  expect(compared == 29, "expected 29 equations in the integrated model");

  // Both dashed-box preemption conjuncts, structurally.
  Formula crash_left = got.equations.at("CrashLeftCar");
  expect(crash_left.kind() == FormulaKind::And &&
             crash_left.rhs() == Formula::negation(Formula::var("LetPass")),
         "CrashLeftCar must end in the !LetPass preemption conjunct");
  Formula margin = got.equations.at("DoNotAdjustSafetyMargin");
  expect(margin.kind() == FormulaKind::And &&
             margin.rhs() ==
                 Formula::negation(Formula::var("DoNotAdjustSpeedDifference")),
         "DoNotAdjustSafetyMargin must end in !DoNotAdjustSpeedDifference");
  expect(got.preemptions == want.preemptions,
         "preemption annotations must match");
}

// --- criterion 4 -----------------------------------------------------------

void criterion_left_crash_unsatisfiable() {
  CausalModel m = model_from_json(fixture("integrated_model.json"));
  std::size_t total = std::size_t{1} << m.exogenous.size();
  expect(total <= 4096, "context space must stay within 2^12");

  for (std::size_t bits = 0; bits < total; ++bits) {
    Context u;
    for (std::size_t i = 0; i < m.exogenous.size(); ++i)
      u.emplace(m.exogenous[i], ((bits >> i) & 1u) != 0);
    if (evaluate(m, u).at("CrashLeftCar")) {
      expect(false, "CrashLeftCar holds without interventions at context " +
                        std::to_string(bits));
      return;
    }
  }

  CausalModel forced = intervene(m, {{"DoNotCheckBlindSpotWarning", true},
                                     {"DoNotCheckLeftViewMirror", true},
                                     {"LetPass", false}});
  for (std::size_t bits = 0; bits < total; ++bits) {
    Context u;
    for (std::size_t i = 0; i < m.exogenous.size(); ++i)
      u.emplace(m.exogenous[i], ((bits >> i) & 1u) != 0);
    if (!evaluate(forced, u).at("CrashLeftCar")) {
      expect(false, "intervention fails to force CrashLeftCar at context " +
                        std::to_string(bits));
      return;
    }
  }
}

// --- criterion 5 -----------------------------------------------------------

void criterion_scenario1_report() {
  CausalModel m = model_from_json(fixture("integrated_model.json"));
  Evidence e = evidence_from_json(fixture("scenario1.evidence.json"));
  CauseQueryOptions opts;
  opts.max_model_size = 32;
  ScenarioReport report = analyze(m, e, parse_formula("Collision"), opts);

  Json got = report_to_json(report);
  Json want = Json::parse(fixture("golden/scenario1_report.json"));
  expect(got == want, "report must equal the golden scenario-1 report");

  bool software_side = false, front_side = false;
  for (const auto& cause : report.causes) {
    for (const auto& lit : cause.candidate) {
      software_side |= lit.var == "SoftwareError" || lit.var == "HackCAS" ||
                       lit.var == "ExploitCASECU" ||
                       lit.var == "GainSystemAccess";
      front_side |= lit.var == "CrashFrontCar" ||
                    lit.var == "DoNotCheckFront" ||
                    lit.var == "DoNotAdjustLeadCarDistance" ||
                    lit.var == "DoNotObserveCourseOfTheRoad";
    }
  }
  expect(software_side, "causes must cover the SoftwareError chain");
  expect(front_side, "causes must cover the CrashFrontCar chain");

  auto pruned_has = [&](const char* node) {
    return std::find(report.pruned.begin(), report.pruned.end(), node) !=
           report.pruned.end();
  };
  expect(pruned_has("FailureWheelBrakeModule") &&
             pruned_has("FailureTransmission") && pruned_has("DisableBrakes") &&
             pruned_has("NoBrakingAlthoughDemand"),
         "mechanical-brake branch must be pruned");
}

// --- criterion 6 -----------------------------------------------------------

void criterion_oracle_equivalence() {
  std::mt19937 rng(20260812);
  CauseQueryOptions opts;
  int checked_contexts = 0;
  for (int round = 0; round < 200; ++round) {
    std::uniform_int_distribution<int> endo_dist(3, 8);
    std::uniform_int_distribution<int> exo_dist(2, 3);
    CausalModel m = ct::random_model(&rng, exo_dist(rng), endo_dist(rng));
    Formula effect = Formula::var(m.endogenous.back());
    for (const auto& u : ct::all_contexts(m)) {
      Assignment actual = evaluate(m, u);
      if (!eval_formula(effect, actual)) continue;
      ++checked_contexts;
      std::vector<CauseVerdict> fast = enumerate_causes(m, u, effect, opts);
      std::vector<ct::NaiveResult> slow =
          ct::naive_enumerate(m, u, effect, opts.max_cause_size);
      if (fast.size() != slow.size()) {
        expect(false, "round " + std::to_string(round) +
                          ": cause counts differ (fast " +
                          std::to_string(fast.size()) + ", naive " +
                          std::to_string(slow.size()) + ")");
        return;
      }
      for (std::size_t i = 0; i < fast.size(); ++i) {
        if (!(fast[i].candidate == slow[i].candidate) ||
            !fast[i].witness.has_value() ||
            fast[i].witness->frozen != slow[i].witness.frozen ||
            !(fast[i].witness->alternative == slow[i].witness.alternative)) {
          expect(false, "round " + std::to_string(round) +
                            ": verdict mismatch at index " + std::to_string(i));
          return;
        }
      }
    }
  }
  expect(checked_contexts > 500, "sanity: enough positive contexts exercised");
}

// --- criterion 7 -----------------------------------------------------------

void criterion_determinism() {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "causalfuse_acceptance";
  fs::create_directories(dir);

  std::vector<std::pair<std::string, std::string>> commands = {
      {"validate_rock", "validate --model " + fixture_path("rock.json")},
      {"eval_rock", "eval --model " + fixture_path("rock.json") +
                        " --context ST_exo=1,BT_exo=1"},
      {"causes_rock", "causes --model " + fixture_path("rock.json") +
                          " --context ST_exo=1,BT_exo=1 --effect BS"},
      {"butfor_rock", "butfor --model " + fixture_path("rock.json") +
                          " --context ST_exo=1,BT_exo=1 --candidate ST=1 "
                          "--effect BS"},
      {"convert_fault", "convert-tree --tree " + fixture_path("fault_tree.json")},
      {"convert_attack",
       "convert-tree --tree " + fixture_path("attack_tree.json")},
      {"convert_hta", "convert-hta --hta " + fixture_path("driver.hta") +
                          " --inversion " +
                          fixture_path("driver_inversion.json")},
      {"merge", "merge --plan " + fixture_path("integrated.plan.json")},
      {"scenario1", "scenario --model " + fixture_path("integrated_model.json") +
                        " --evidence " + fixture_path("scenario1.evidence.json") +
                        " --effect Collision --max-model-size 32"},
      {"scenario2", "scenario --model " + fixture_path("integrated_model.json") +
                        " --evidence " + fixture_path("scenario2.evidence.json") +
                        " --effect CrashLeftCar --max-model-size 32"},
      {"dot_rock", "dot --model " + fixture_path("rock.json")},
      {"dot_scenario1", "dot --model " + fixture_path("integrated_model.json") +
                            " --evidence " +
                            fixture_path("scenario1.evidence.json")},
  };

  for (const auto& [stem, args] : commands) {
    std::vector<std::string> outputs;
    for (int run = 0; run < 3; ++run) {
      fs::path out = dir / (stem + "_" + std::to_string(run) + ".out");
      std::string command = std::string(CAUSALFUSE_CLI) + " " + args + " > " +
                            out.string() + " 2> /dev/null";
      int status = std::system(command.c_str());
      if (WEXITSTATUS(status) != 0) {
        expect(false, stem + ": run " + std::to_string(run) + " exited " +
                          std::to_string(WEXITSTATUS(status)));
        return;
      }
      outputs.push_back(read_text_file(out));
    }
    if (outputs[0] != outputs[1] || outputs[1] != outputs[2]) {
      expect(false, stem + ": outputs differ across repeated runs");
      return;
    }
    if (outputs[0].empty()) expect(false, stem + ": produced no output");
  }
}

}  // namespace

int main() {
  std::cout << "causalfuse acceptance suite\n";
  run_criterion(1, "rock-throwing causes and witnesses", 1.0,
                criterion_rock_throwing);
  run_criterion(2, "tree transform agrees with direct evaluation", 30.0,
                criterion_tree_transform_oracle);
  run_criterion(3, "merge plan reproduces the integrated equations", 0,
                criterion_integrated_equations);
  run_criterion(4, "left-lane crash needs interventions", 5.0,
                criterion_left_crash_unsatisfiable);
  run_criterion(5, "scenario 1 analysis matches the golden report", 0,
                criterion_scenario1_report);
  run_criterion(6, "enumeration agrees with the naive oracle", 120.0,
                criterion_oracle_equivalence);
  run_criterion(7, "fixture commands are byte-deterministic", 0,
                criterion_determinism);

  if (failures == 0)
    std::cout << "all criteria passed\n";
  else
    std::cout << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
