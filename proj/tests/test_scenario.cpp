#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cuckoo/scenario.hpp"

using namespace cuckoo;

namespace {

std::string scenario_path(const std::string& name) {
    return std::string(SCENARIO_DIR) + "/" + name;
}

} // namespace

TEST_CASE("bundled scenarios parse and validate") {
    for (const char* name : {"benign_4_1.scenario", "equivocate_4_1.scenario",
                             "blocked_gate_7_2.scenario", "flood_drop_4_1.scenario",
                             "benign_7_2.scenario"}) {
        INFO(name);
        Scenario sc = Scenario::load(scenario_path(name));
        CHECK_NOTHROW(sc.validate());
    }
}

TEST_CASE("parse failures are reported as such") {
    CHECK_THROWS_AS(Scenario::parse("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(Scenario::parse("{}"), std::exception); // missing required fields
    CHECK_THROWS_AS(Scenario::load("/nonexistent/path.scenario"), std::invalid_argument);

    // structural validation errors
    Scenario sc = Scenario::load(scenario_path("benign_4_1.scenario"));
    sc.inputs.pop_back();
    CHECK_THROWS_AS(sc.validate(), std::invalid_argument);

    Scenario sc2 = Scenario::load(scenario_path("benign_4_1.scenario"));
    sc2.controlled = ProcessorSet{0, 1}; // two processors exceed t=1
    CHECK_THROWS_AS(sc2.validate(), std::invalid_argument);
}

TEST_CASE("predicate violation is a distinct outcome") {
    Scenario sc = Scenario::load(scenario_path("predicate_violation_3_1.scenario"));
    ScenarioResult r = run_scenario(sc);
    CHECK(r.exit_code == kExitPredicate);
    CHECK_FALSE(r.error.empty());
}

TEST_CASE("benign scenario runs green") {
    Scenario sc = Scenario::load(scenario_path("benign_4_1.scenario"));
    ScenarioResult r = run_scenario(sc);
    CHECK(r.exit_code == kExitOk);
    CHECK(r.trace.header.completed);
    for (const auto& rep : r.reports) {
        INFO(rep.id, ": ", rep.witness);
        CHECK(rep.verdict == Verdict::PASS);
    }
}

TEST_CASE("equivocation scenario recovers and explains itself") {
    Scenario sc = Scenario::load(scenario_path("equivocate_4_1.scenario"));
    ScenarioResult r = run_scenario(sc);
    REQUIRE(r.exit_code == kExitOk);
    bool saw_cuckoo = false;
    for (const auto& rep : r.reports) {
        if (rep.id == "CUCKOO") {
            saw_cuckoo = true;
            CHECK(rep.verdict == Verdict::PASS);
            CHECK(rep.witness.find("p1") != std::string::npos); // names the controlled one
        }
    }
    CHECK(saw_cuckoo);
}

TEST_CASE("budget exhaustion maps to its own exit code") {
    Scenario sc = Scenario::load(scenario_path("benign_4_1.scenario"));
    ScenarioOverrides o;
    o.max_events = 50; // nowhere near enough
    ScenarioResult r = run_scenario(sc, o);
    CHECK(r.exit_code == kExitBudget);
}

TEST_CASE("identical runs write byte-identical traces") {
    Scenario sc = Scenario::load(scenario_path("equivocate_4_1.scenario"));
    ScenarioResult a = run_scenario(sc);
    ScenarioResult b = run_scenario(sc);
    CHECK(a.trace.to_string() == b.trace.to_string());

    ScenarioOverrides o;
    o.seed = 77;
    ScenarioResult c = run_scenario(sc, o);
    CHECK(a.trace.to_string() != c.trace.to_string()); // seed actually matters
}

TEST_CASE("sweep aggregates seeds") {
    Scenario sc = Scenario::load(scenario_path("benign_4_1.scenario"));
    SweepResult agg = sweep(sc, 1, 5);
    CHECK(agg.runs == 5);
    CHECK(agg.passed == 5);
    CHECK(agg.exit_code == kExitOk);
    CHECK_THROWS_AS(sweep(sc, 1, 0), std::invalid_argument);
}

TEST_CASE("cli binary honors the exit-code contract") {
    std::string bin = CUCKOO_SIM_BIN;
    auto run_cli = [&bin](const std::string& args) {
        int status = std::system((bin + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(status);
    };
    CHECK(run_cli(scenario_path("benign_4_1.scenario")) == kExitOk);
    CHECK(run_cli(scenario_path("predicate_violation_3_1.scenario")) == kExitPredicate);
    CHECK(run_cli("/nonexistent.scenario") == kExitParse);
    CHECK(run_cli(scenario_path("benign_4_1.scenario") + " --max-events 50") == kExitBudget);

    // trace and report land where asked
    std::string trace_path = "/tmp/cuckoo_cli_trace.jsonl";
    std::string report_path = "/tmp/cuckoo_cli_report.json";
    CHECK(run_cli(scenario_path("flood_drop_4_1.scenario") + " --trace-out " + trace_path +
                  " --report-out " + report_path) == kExitOk);
    std::ifstream t(trace_path), rep(report_path);
    CHECK(t.good());
    CHECK(rep.good());
    std::stringstream ss;
    ss << t.rdbuf();
    CHECK(ss.str().find("trace_version") != std::string::npos);
}
