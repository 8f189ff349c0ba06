#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "causalfuse/errors.hpp"
#include "causalfuse/hta.hpp"
#include "causalfuse/json_io.hpp"
#include "causalfuse/merge.hpp"
#include "causalfuse/tree.hpp"
#include "support/generators.hpp"
#include "support/normalize.hpp"

using namespace causalfuse;
namespace ct = causalfuse::testing;

namespace {

std::string fixture_path(const std::string& name) {
  return std::string(CAUSALFUSE_FIXTURES) + "/" + name;
}

std::string fixture(const std::string& name) {
  return read_text_file(fixture_path(name));
}

CausalModel fault_model() {
  return tree_to_causal(parse_tree(fixture("fault_tree.json")));
}

CausalModel attack_model() {
  return tree_to_causal(parse_tree(fixture("attack_tree.json")));
}

CausalModel build_integrated() {
  return run_merge_plan(fixture("integrated.plan.json"), CAUSALFUSE_FIXTURES);
}

void check_models_equal(const CausalModel& got, const CausalModel& want) {
  CHECK(got.exogenous == want.exogenous);
  CHECK(got.endogenous == want.endogenous);
  REQUIRE(got.endogenous.size() == want.endogenous.size());
  for (const auto& node : want.endogenous)
    CHECK(ct::normal_key(got.equations.at(node)) ==
          ct::normal_key(want.equations.at(node)));
  CHECK(got.preemptions == want.preemptions);
  CHECK(got.provenance == want.provenance);
}

}  // namespace

TEST_CASE("refine hangs the CAS attack under the software-error fault") {
  CausalModel sub = submodel(attack_model(), "HackCAS");
  CausalModel merged = refine(fault_model(), "SoftwareError", sub);
  CHECK(merged.equations.at("SoftwareError") == Formula::var("HackCAS"));
  CHECK_FALSE(merged.is_exogenous("SoftwareError_exo"));
  CHECK(merged.is_exogenous("ExploitCASECU_exo"));
  CHECK(validate_model(merged).ok());
  CHECK(merged.provenance_of("SoftwareError") == Provenance::FaultTree);
  CHECK(merged.provenance_of("HackCAS") == Provenance::AttackTree);
}

TEST_CASE("refining with a single-node model relinks the driver") {
  CausalModel base = fault_model();
  CausalModel single;
  single.name = "spoof";
  single.exogenous = {"SpoofSensor_exo"};
  single.endogenous = {"SpoofSensor"};
  single.equations.emplace("SpoofSensor", parse_formula("SpoofSensor_exo"));
  CausalModel merged = refine(base, "ObjectMissclassified", single);
  CHECK(merged.equations.at("ObjectMissclassified") ==
        Formula::var("SpoofSensor"));
  CHECK_FALSE(merged.is_exogenous("ObjectMissclassified_exo"));
  CHECK(merged.is_exogenous("SpoofSensor_exo"));
}

TEST_CASE("refine with a same-named root identifies the two nodes") {
  CausalModel base = fault_model();
  CausalModel brakes = submodel(attack_model(), "DisableBrakes");
  CausalModel merged = refine(base, "DisableBrakes", brakes);
  CHECK(merged.equations.at("DisableBrakes") ==
        Formula::var("DisableBrakes_exo"));
  CHECK(merged.exogenous == base.exogenous);
  CHECK(merged.endogenous == base.endogenous);
}

TEST_CASE("refine at two distinct leaves commutes") {
  CausalModel base = fault_model();
  CausalModel cas = submodel(attack_model(), "HackCAS");
  CausalModel single;
  single.exogenous = {"Spoof_exo"};
  single.endogenous = {"Spoof"};
  single.equations.emplace("Spoof", parse_formula("Spoof_exo"));

  CausalModel ab =
      refine(refine(base, "SoftwareError", cas), "ObjectMissclassified", single);
  CausalModel ba =
      refine(refine(base, "ObjectMissclassified", single), "SoftwareError", cas);
  for (const auto& node : ab.endogenous)
    CHECK(ab.equations.at(node) == ba.equations.at(node));
  CHECK(std::set<std::string>(ab.exogenous.begin(), ab.exogenous.end()) ==
        std::set<std::string>(ba.exogenous.begin(), ba.exogenous.end()));
}

TEST_CASE("refine rejects collisions and non-leaf targets") {
  CausalModel base = fault_model();
  CHECK_THROWS_WITH_AS(refine(base, "SoftwareError", attack_model()),
                       doctest::Contains("DisableBrakes"), Error);
  CausalModel cas = submodel(attack_model(), "HackCAS");
  CHECK_THROWS_AS(refine(base, "Collision", cas), Error);
  CHECK_THROWS_AS(refine(base, "NotThere", cas), Error);
}

TEST_CASE("refinement preserves base semantics on untouched nodes") {
  CausalModel base = fault_model();
  CausalModel cas = submodel(attack_model(), "HackCAS");
  CausalModel merged = refine(base, "SoftwareError", cas);
  // Contexts that agree on surviving exogenous variables: make the refined
  // subtree reproduce the old driver's value.
  for (const auto& base_u : ct::all_contexts(base)) {
    Context merged_u;
    for (const auto& name : merged.exogenous) {
      if (base.is_exogenous(name)) {
        merged_u.emplace(name, base_u.at(name));
      } else {
        // Drive the hack chain to reproduce SoftwareError_exo.
        merged_u.emplace(name, base_u.at("SoftwareError_exo"));
      }
    }
    Assignment before = evaluate(base, base_u);
    Assignment after = evaluate(merged, merged_u);
    for (const auto& node : base.endogenous)
      CHECK(before.at(node) == after.at(node));
  }
}

TEST_CASE("equate replaces an exogenous-driven leaf with the incoming root") {
  CausalModel base = fault_model();
  Diagnostics warnings;
  HtaModel h = parse_hta(fixture("driver.hta"));
  InversionSpec spec =
      inversion_spec_from_json(fixture("driver_inversion.json"));
  CausalModel driver = invert_hta(h, spec, &warnings);

  CausalModel merged = equate(base, "DriverFailure", driver, "Crash");
  CHECK(ct::normal_key(merged.equations.at("DriverFailure")) ==
        ct::normal_key("CrashLeftCar | CrashFrontCar"));
  CHECK_FALSE(merged.is_exogenous("DriverFailure_exo"));
  CHECK(validate_model(merged).ok());
}

TEST_CASE("equate is idempotent on copies of the same model") {
  CausalModel m = fault_model();
  CausalModel merged = equate(m, "Collision", m, "Collision");
  check_models_equal(merged, m);
}

TEST_CASE("equate rejects unknown and non-root nodes") {
  CausalModel a = fault_model();
  CausalModel b = attack_model();
  CHECK_THROWS_AS(equate(a, "Ghost", b, "CrashCar"), Error);
  CHECK_THROWS_AS(equate(a, "DriverFailure", b, "HackCAS"), Error);
}

TEST_CASE("extend with empty glue is a disjoint union") {
  CausalModel a = fault_model();
  CausalModel b;
  b.name = "side";
  b.exogenous = {"S_exo"};
  b.endogenous = {"S"};
  b.equations.emplace("S", parse_formula("S_exo"));
  CausalModel merged = extend(a, b, {});
  CHECK(merged.endogenous.size() == a.endogenous.size() + 1);
  CHECK(merged.is_endogenous("S"));
  CHECK(validate_model(merged).ok());
}

TEST_CASE("glue can annotate a chosen preemption direction") {
  CausalModel a = fault_model();
  CausalModel b;
  b.exogenous = {"S_exo"};
  b.endogenous = {"S"};
  b.equations.emplace("S", parse_formula("S_exo"));
  GlueSpec glue;
  glue.preemptions.emplace_back("SystemFailure", "DriverFailure");
  CausalModel merged = extend(a, b, glue);
  REQUIRE(merged.preemptions.size() == 1);
  CHECK(merged.preemptions.front() ==
        std::pair<std::string, std::string>{"SystemFailure", "DriverFailure"});
}

TEST_CASE("merge plans support standalone equate steps") {
  std::string plan = R"({
    "steps": [
      {"op": "load-tree", "as": "fault", "path": "fault_tree.json"},
      {"op": "load-hta", "as": "driver", "path": "driver.hta",
       "inversion": "driver_inversion.json"},
      {"op": "equate", "as": "joined", "base": "fault",
       "node": "DriverFailure", "with": "driver", "incoming": "Crash"},
      {"op": "output", "model": "joined"}
    ]})";
  Diagnostics warnings;
  CausalModel merged = run_merge_plan(plan, CAUSALFUSE_FIXTURES, &warnings);
  CHECK(ct::normal_key(merged.equations.at("DriverFailure")) ==
        ct::normal_key("CrashLeftCar | CrashFrontCar"));
  CHECK(validate_model(merged).ok());
}

TEST_CASE("extend rejects equates whose equations conflict") {
  CausalModel a = fault_model();
  CausalModel b;
  b.exogenous = {"X_exo"};
  b.endogenous = {"X", "Collision"};
  b.equations.emplace("X", parse_formula("X_exo"));
  b.equations.emplace("Collision", parse_formula("X"));
  GlueSpec glue;
  glue.equate.emplace_back("Collision", "Collision");
  CHECK_THROWS_WITH_AS(extend(a, b, glue), doctest::Contains("rewrite"),
                       Error);
}

TEST_CASE("extend rejects glue that introduces a cycle") {
  CausalModel a = fault_model();
  CausalModel b;
  b.exogenous = {"S_exo"};
  b.endogenous = {"S"};
  b.equations.emplace("S", parse_formula("S_exo"));
  GlueSpec glue;
  glue.rewrites.push_back({"DriverFailure", parse_formula("Collision")});
  CHECK_THROWS_WITH_AS(extend(a, b, glue), doctest::Contains("cycle"), Error);
}

TEST_CASE("extend rejects duplicate names outside the equate list") {
  CausalModel a = fault_model();
  CausalModel b;
  b.exogenous = {"Q_exo"};
  b.endogenous = {"Q", "SystemFailure"};
  b.equations.emplace("Q", parse_formula("Q_exo"));
  b.equations.emplace("SystemFailure", parse_formula("Q"));
  CHECK_THROWS_WITH_AS(extend(a, b, {}),
                       doctest::Contains("SystemFailure"), Error);
}

TEST_CASE("merge plan reproduces the bundled integrated model") {
  Diagnostics warnings;
  CausalModel got = run_merge_plan(fixture("integrated.plan.json"),
                                   CAUSALFUSE_FIXTURES, &warnings);
  CausalModel want = model_from_json(fixture("integrated_model.json"));
  CHECK(got.name == want.name);
  check_models_equal(got, want);

  // Both dashed-box preemption conjuncts are present structurally.
  Formula crash_left = got.equations.at("CrashLeftCar");
  CHECK(crash_left.rhs() == Formula::negation(Formula::var("LetPass")));
  Formula margin = got.equations.at("DoNotAdjustSafetyMargin");
  CHECK(margin.rhs() ==
        Formula::negation(Formula::var("DoNotAdjustSpeedDifference")));
}

TEST_CASE("node accounting: union minus equated plus added") {
  CausalModel integrated = build_integrated();
  CausalModel fault = fault_model();
  CausalModel attack = attack_model();
  Diagnostics warnings;
  CausalModel driver = invert_hta(
      parse_hta(fixture("driver.hta")),
      inversion_spec_from_json(fixture("driver_inversion.json")), &warnings);
  // Fault tree + CAS branch of the attack tree + driver model, one node
  // equated away (Crash == DriverFailure), one added (NoEvasiveManeuver).
  std::size_t cas = submodel(attack, "HackCAS").endogenous.size();
  CHECK(integrated.endogenous.size() ==
        fault.endogenous.size() + cas + driver.endogenous.size() - 1 + 1);
}

TEST_CASE("submodel keeps reachable nodes and their drivers only") {
  CausalModel cas = submodel(attack_model(), "HackCAS");
  CHECK(cas.endogenous ==
        std::vector<std::string>{"HackCAS", "GainSystemAccess", "ExploitCASECU",
                                 "ExploitInfotainment", "ExploitV2VInterface"});
  CHECK(cas.exogenous ==
        std::vector<std::string>{"ExploitCASECU_exo", "ExploitInfotainment_exo",
                                 "ExploitV2VInterface_exo"});
  CHECK(validate_model(cas).ok());
}
