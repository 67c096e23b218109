// Scenario runner: load a scenario file, execute the simulation, write the
// trace and the property report, print a summary. Exit codes: 0 all
// non-vacuous properties pass, 2 property failure, 3 parse/validation error,
// 4 fault-predicate violation, 5 event budget exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cuckoo/scenario.hpp"

using namespace cuckoo;

namespace {

int write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        std::cerr << "cannot write " << path << "\n";
        return 1;
    }
    out << content;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarially-scheduled broadcast/simulation runner"};

    std::string scenario_path;
    std::string trace_out;
    std::string report_out;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::uint64_t max_events = 0;
    std::uint64_t quiet_extension = 0;
    std::vector<std::string> check_only;
    int sweep_count = 0;

    app.add_option("scenario", scenario_path, "scenario file (json)")->required();
    app.add_option("--seed", seed, "override the scenario seed")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--trace-out", trace_out, "write the trace file here");
    app.add_option("--report-out", report_out, "write the property report (json) here");
    app.add_option("--max-events", max_events, "override the delivery budget");
    app.add_option("--quiet-extension", quiet_extension, "override the quiet-extension budget");
    app.add_option("--check", check_only, "property ids to check (default: all)")->delimiter(',');
    auto* sweep_opt =
        app.add_option("--sweep", sweep_count, "run this many consecutive seeds and aggregate");

    CLI11_PARSE(app, argc, argv);

    if (sweep_opt->count() > 0 && sweep_count <= 0) {
        std::cerr << "error: --sweep needs a positive seed count\n";
        return kExitParse;
    }

    Scenario sc;
    try {
        sc = Scenario::load(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }

    ScenarioOverrides overrides;
    if (seed_set) overrides.seed = seed;
    if (max_events) overrides.max_events = max_events;
    if (quiet_extension) overrides.quiet_extension = quiet_extension;
    overrides.check_only = check_only;

    if (sweep_count > 0) {
        std::uint64_t first = seed_set ? seed : sc.seed;
        SweepResult agg = sweep(sc, first, sweep_count, overrides);
        std::cout << "sweep: " << agg.passed << "/" << agg.runs << " seeds passed\n";
        for (const auto& [s, why] : agg.failures)
            std::cout << "  seed " << s << ": " << why << "\n";
        return agg.exit_code;
    }

    ScenarioResult result = run_scenario(sc, overrides);

    if (!result.error.empty()) std::cerr << "error: " << result.error << "\n";
    bool ran = result.exit_code == kExitOk || result.exit_code == kExitPropertyFail ||
               result.exit_code == kExitBudget;
    if (ran) {
        std::string stem = scenario_path;
        auto slash = stem.find_last_of('/');
        if (slash != std::string::npos) stem = stem.substr(slash + 1);
        auto dot = stem.find('.');
        if (dot != std::string::npos) stem = stem.substr(0, dot);
        if (trace_out.empty()) trace_out = stem + ".trace.jsonl";
        if (report_out.empty()) report_out = stem + ".report.json";
        if (write_file(trace_out, result.trace.to_string()) != 0) return kExitParse;
        if (write_file(report_out, report_to_json(result.reports)) != 0) return kExitParse;
        std::cout << "stop: " << result.stop_reason
                  << (result.trace.header.completed ? " (quiet-complete)" : " (incomplete)")
                  << ", trace: " << trace_out << " (" << result.trace.events.size()
                  << " events), report: " << report_out << "\n";
        std::cout << render_report(result.reports);
    }
    return result.exit_code;
}
