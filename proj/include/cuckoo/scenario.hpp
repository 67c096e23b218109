#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cuckoo/engine.hpp"
#include "cuckoo/sim_net.hpp"
#include "cuckoo/trace_harness.hpp"

namespace cuckoo {

// CLI exit contract
inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFail = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitPredicate = 4;
inline constexpr int kExitBudget = 5;

struct TamperSpec {
    int processor = -1;
    std::string script; // equivocate-input | flip-id-sets | drop-all | drop-then-recover
    // script parameters
    std::int64_t value_a = 0;
    std::int64_t value_b = 0;
    std::vector<int> targets_a; // receivers of value_a; empty = lower half
    bool shuffle = false;       // pick a/b per envelope from the seed stream
    std::vector<int> add_ids;
    std::vector<int> remove_ids;
    int round = -1; // restrict flip-id-sets to one context round; -1 = any
    bool malform = false;
};

struct Scenario {
    int n = 4;
    int threshold = -1; // >= 0: threshold collection
    std::vector<ProcessorSet> maximal_sets;

    ProcessorSet controlled;
    std::vector<TamperSpec> tamper;
    std::vector<int> recovery_order;
    std::uint64_t delay_spread = 8;

    std::string protocol = "epsilon-agreement";
    std::int64_t interval_lo = 0;
    std::int64_t interval_hi = 16;
    std::vector<std::int64_t> inputs;

    std::string mode = "bimo"; // bimo | bisynch
    std::uint64_t seed = 1;
    std::uint64_t max_events = 400000;
    std::uint64_t quiet_extension = 400000;
    std::string stop = "all-outputs"; // all-outputs | correct-outputs | quiescent
    std::string expect;               // "" | "predicate-violation"

    static Scenario load(const std::string& path);
    static Scenario parse(const std::string& json_text);

    BadSetCollection collection() const;
    void validate() const; // throws std::invalid_argument on bad structure
};

// Deterministic tamper function from the catalog.
TamperScript make_tamper_script(const TamperSpec& spec, int n);

AdversaryPolicy make_policy(const Scenario& sc);

struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_events;
    std::optional<std::uint64_t> quiet_extension;
    std::vector<std::string> check_only;
};

struct ScenarioResult {
    int exit_code = kExitOk;
    std::string error;
    std::string stop_reason;
    Trace trace;
    std::vector<PropertyReport> reports;
};

ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOverrides& overrides = {});

struct SweepResult {
    int exit_code = kExitOk;
    int runs = 0;
    int passed = 0;
    std::vector<std::pair<std::uint64_t, std::string>> failures; // seed -> summary
};

SweepResult sweep(const Scenario& scenario, std::uint64_t first_seed, int count,
                  const ScenarioOverrides& overrides = {});

} // namespace cuckoo
