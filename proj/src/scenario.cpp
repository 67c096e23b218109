#include "cuckoo/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "cuckoo/example_protocols.hpp"

namespace cuckoo {

namespace {

ProcessorSet set_from_json(const nlohmann::json& arr) {
    ProcessorSet s;
    for (const auto& id : arr) s.insert(id.get<int>());
    return s;
}

} // namespace

Scenario Scenario::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

Scenario Scenario::parse(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("scenario parse error: ") + e.what());
    }

    Scenario sc;
    sc.n = j.at("n").get<int>();

    const auto& fault = j.at("fault");
    if (fault.contains("threshold")) {
        sc.threshold = fault["threshold"].at("t").get<int>();
    } else if (fault.contains("maximal_sets")) {
        for (const auto& ms : fault["maximal_sets"]) sc.maximal_sets.push_back(set_from_json(ms));
    } else {
        throw std::invalid_argument("fault must declare threshold or maximal_sets");
    }

    if (j.contains("adversary")) {
        const auto& adv = j["adversary"];
        if (adv.contains("controlled")) sc.controlled = set_from_json(adv["controlled"]);
        if (adv.contains("recovery_order"))
            sc.recovery_order = adv["recovery_order"].get<std::vector<int>>();
        if (adv.contains("delay_spread")) sc.delay_spread = adv["delay_spread"].get<std::uint64_t>();
        if (adv.contains("tamper")) {
            for (const auto& ts : adv["tamper"]) {
                TamperSpec spec;
                spec.processor = ts.at("processor").get<int>();
                spec.script = ts.at("script").get<std::string>();
                if (ts.contains("value_a")) spec.value_a = ts["value_a"].get<std::int64_t>();
                if (ts.contains("value_b")) spec.value_b = ts["value_b"].get<std::int64_t>();
                if (ts.contains("targets_a")) spec.targets_a = ts["targets_a"].get<std::vector<int>>();
                if (ts.contains("shuffle")) spec.shuffle = ts["shuffle"].get<bool>();
                if (ts.contains("add_ids")) spec.add_ids = ts["add_ids"].get<std::vector<int>>();
                if (ts.contains("remove_ids"))
                    spec.remove_ids = ts["remove_ids"].get<std::vector<int>>();
                if (ts.contains("round")) spec.round = ts["round"].get<int>();
                if (ts.contains("malform")) spec.malform = ts["malform"].get<bool>();
                sc.tamper.push_back(std::move(spec));
            }
        }
    }

    const auto& proto = j.at("protocol");
    sc.protocol = proto.at("name").get<std::string>();
    if (proto.contains("interval")) {
        sc.interval_lo = proto["interval"][0].get<std::int64_t>();
        sc.interval_hi = proto["interval"][1].get<std::int64_t>();
    }
    sc.inputs = proto.at("inputs").get<std::vector<std::int64_t>>();

    if (j.contains("mode")) sc.mode = j.at("mode").get<std::string>();
    if (j.contains("seed")) sc.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("budgets")) {
        const auto& b = j["budgets"];
        if (b.contains("max_events")) sc.max_events = b["max_events"].get<std::uint64_t>();
        if (b.contains("quiet_extension"))
            sc.quiet_extension = b["quiet_extension"].get<std::uint64_t>();
    }
    if (j.contains("stop")) sc.stop = j.at("stop").get<std::string>();
    if (j.contains("expect")) sc.expect = j.at("expect").get<std::string>();
    return sc;
}

BadSetCollection Scenario::collection() const {
    if (threshold >= 0) return BadSetCollection::threshold_collection(n, threshold);
    return BadSetCollection::from_maximal_sets(n, maximal_sets);
}

void Scenario::validate() const {
    if (n < 1 || n > ProcessorSet::kMaxUniverse)
        throw std::invalid_argument("scenario: n out of range");
    if (protocol != "epsilon-agreement" && protocol != "flood")
        throw std::invalid_argument("scenario: unknown protocol " + protocol);
    if (static_cast<int>(inputs.size()) != n)
        throw std::invalid_argument("scenario: need exactly n inputs");
    if (mode != "bimo" && mode != "bisynch")
        throw std::invalid_argument("scenario: mode must be bimo or bisynch");
    if (stop != "all-outputs" && stop != "correct-outputs" && stop != "quiescent")
        throw std::invalid_argument("scenario: unknown stop predicate " + stop);
    BadSetCollection coll = collection();
    if (!coll.is_bad(controlled))
        throw std::invalid_argument("scenario: controlled set is not a member of the collection");
    for (const auto& ts : tamper) {
        if (!controlled.contains(ts.processor))
            throw std::invalid_argument("scenario: tamper script on uncontrolled processor");
        if (ts.script != "equivocate-input" && ts.script != "flip-id-sets" &&
            ts.script != "drop-all" && ts.script != "drop-then-recover")
            throw std::invalid_argument("scenario: unknown tamper script " + ts.script);
    }
    for (int p : recovery_order)
        if (!controlled.contains(p))
            throw std::invalid_argument("scenario: recovery_order names uncontrolled processor");
}

TamperScript make_tamper_script(const TamperSpec& spec, int n) {
    if (spec.script == "drop-all") {
        return [](std::uint64_t, const Envelope&) { return TamperAction::drop(); };
    }
    if (spec.script == "drop-then-recover") {
        // silence only the processor's own broadcasts; relay duty is untouched
        return [](std::uint64_t, const Envelope& env) {
            if (env.payload.type == MsgType::RecrbPush) return TamperAction::drop();
            if (env.payload.type == MsgType::RbInitial && env.payload.rb_sender == env.from)
                return TamperAction::drop();
            return TamperAction::pass();
        };
    }
    if (spec.script == "equivocate-input") {
        TamperSpec s = spec;
        return [s, n](std::uint64_t seed, const Envelope& env) {
            const Message& m = env.payload;
            bool carries_input = (m.type == MsgType::RecrbPush || m.type == MsgType::RbInitial) &&
                                 m.round == 1 && m.value.is_int();
            if (!carries_input) return TamperAction::pass();
            bool use_a;
            if (s.shuffle)
                use_a = mix64(seed, env.seq) & 1;
            else if (!s.targets_a.empty())
                use_a = std::find(s.targets_a.begin(), s.targets_a.end(), env.to) !=
                        s.targets_a.end();
            else
                use_a = env.to < n / 2;
            Message repl = m;
            repl.value = Value::integer(use_a ? s.value_a : s.value_b);
            return TamperAction::replace(std::move(repl));
        };
    }
    if (spec.script == "flip-id-sets") {
        TamperSpec s = spec;
        return [s](std::uint64_t, const Envelope& env) {
            const Message& m = env.payload;
            bool targeted = (m.type == MsgType::RecrbPush || m.type == MsgType::RbInitial) &&
                            (s.round < 0 || m.round == s.round) && m.value.is_id_set();
            if (!targeted) return TamperAction::pass();
            Message repl = m;
            if (s.malform) {
                repl.value = Value::integer(0);
            } else {
                ProcessorSet ids = m.value.as_id_set();
                for (int id : s.add_ids) ids.insert(id);
                for (int id : s.remove_ids) ids.erase(id);
                repl.value = Value::id_set(ids);
            }
            return TamperAction::replace(std::move(repl));
        };
    }
    throw std::invalid_argument("unknown tamper script: " + spec.script);
}

AdversaryPolicy make_policy(const Scenario& sc) {
    AdversaryPolicy policy;
    policy.controlled = sc.controlled;
    policy.recovery_order = sc.recovery_order;
    policy.delay_spread = sc.delay_spread;
    for (const auto& ts : sc.tamper) policy.scripts[ts.processor] = make_tamper_script(ts, sc.n);
    return policy;
}

ScenarioResult run_scenario(const Scenario& scenario, const ScenarioOverrides& overrides) {
    ScenarioResult result;

    Scenario sc = scenario;
    if (overrides.seed) sc.seed = *overrides.seed;
    if (overrides.max_events) sc.max_events = *overrides.max_events;
    if (overrides.quiet_extension) sc.quiet_extension = *overrides.quiet_extension;

    try {
        sc.validate();
    } catch (const std::exception& e) {
        result.exit_code = kExitParse;
        result.error = e.what();
        return result;
    }

    BadSetCollection coll = sc.collection();
    if (!coll.satisfies_byzantine_predicate()) {
        result.exit_code = kExitPredicate;
        result.error = "fault collection violates the byzantine predicate (three bad sets cover "
                       "the universe)";
        return result;
    }
    if (sc.expect == "predicate-violation") {
        result.exit_code = kExitParse;
        result.error = "scenario expected a predicate violation but the collection passes";
        return result;
    }

    std::unique_ptr<SyncProtocol> protocol;
    if (sc.protocol == "epsilon-agreement")
        protocol = make_epsilon_agreement(EpsilonAgreementConfig{sc.interval_lo, sc.interval_hi},
                                          sc.n);
    else
        protocol = make_flood(sc.n);

    EngineSetup setup;
    setup.collection = &coll;
    setup.policy = make_policy(sc);
    setup.seed = sc.seed;
    setup.protocol = protocol.get();
    setup.mode = sc.mode == "bimo" ? EngineMode::BiMo : EngineMode::BiSynch;
    for (auto v : sc.inputs) setup.inputs.push_back(Value::integer(v));

    auto sim = make_engine_simulation(setup);
    TraceHeader& hdr = sim->trace().header;
    hdr.mode = sc.mode;
    hdr.protocol = sc.protocol;
    hdr.interval_lo = sc.interval_lo;
    hdr.interval_hi = sc.interval_hi;
    hdr.inputs = sc.inputs;
    hdr.max_events = sc.max_events;
    hdr.quiet_extension = sc.quiet_extension;

    sim->start_all();

    std::function<bool()> stop;
    if (sc.stop == "all-outputs") {
        stop = [&sim, &sc] { return sim->outputs().size() == sc.n; };
    } else if (sc.stop == "correct-outputs") {
        ProcessorSet correct = sc.controlled.complement(sc.n);
        stop = [&sim, correct] { return correct.subset_of(sim->outputs()); };
    } else {
        stop = [] { return false; };
    }

    RunResult run = sim->run_until(stop, sc.max_events);
    result.stop_reason = run.reason;
    sim->trace().header.stop_reason = run.reason;
    if (run.reason == "budget") {
        sim->run_quiet_extension(sc.quiet_extension);
        result.trace = sim->trace();
        result.exit_code = kExitBudget;
        result.error = "event budget exhausted before the stop predicate held";
        result.reports = run_all_checks(result.trace, CheckOptions{overrides.check_only, {}, 0, false});
        return result;
    }

    sim->run_quiet_extension(sc.quiet_extension);
    result.trace = sim->trace();

    CheckOptions opts;
    opts.only = overrides.check_only;
    for (std::int64_t v = sc.interval_lo; v <= sc.interval_hi && v - sc.interval_lo < 64; ++v)
        opts.candidate_domain.push_back(v);
    result.reports = run_all_checks(result.trace, opts);
    result.exit_code = all_pass(result.reports) ? kExitOk : kExitPropertyFail;
    return result;
}

SweepResult sweep(const Scenario& scenario, std::uint64_t first_seed, int count,
                  const ScenarioOverrides& overrides) {
    if (count <= 0) throw std::invalid_argument("sweep: seed count must be positive");
    SweepResult agg;
    for (int i = 0; i < count; ++i) {
        ScenarioOverrides o = overrides;
        o.seed = first_seed + static_cast<std::uint64_t>(i);
        ScenarioResult r = run_scenario(scenario, o);
        agg.runs += 1;
        if (r.exit_code == kExitOk) {
            agg.passed += 1;
        } else {
            std::string summary = r.error;
            for (const auto& rep : r.reports)
                if (rep.verdict == Verdict::FAIL)
                    summary += (summary.empty() ? "" : "; ") + rep.id + ": " + rep.witness;
            agg.failures.push_back({*o.seed, summary});
            if (agg.exit_code == kExitOk) agg.exit_code = r.exit_code;
        }
    }
    return agg;
}

} // namespace cuckoo
