// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Every threshold and tolerance is pinned here, in code.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

#include "cuckoo/broadcast.hpp"
#include "cuckoo/engine.hpp"
#include "cuckoo/example_protocols.hpp"
#include "cuckoo/scenario.hpp"
#include "cuckoo/trace_harness.hpp"

using namespace cuckoo;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Criterion {
    explicit Criterion(int n) : number(n) {}
    int number;
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (ok) detail = why;
        ok = false;
    }
    bool finish(double elapsed) const {
        std::cout << "CRITERION " << number << ": " << (ok ? "PASS" : "FAIL");
        if (!detail.empty()) std::cout << " — " << detail;
        std::cout << " (" << elapsed << " s)\n";
        return ok;
    }
};

const PropertyReport* find_report(const std::vector<PropertyReport>& rs, const std::string& id) {
    for (const auto& r : rs)
        if (r.id == id) return &r;
    return nullptr;
}

// ---------------------------------------------------------------------------
// broadcast-layer adapter nodes (no engine on top)

class BroadcastNode : public NodeHandler {
  public:
    BroadcastNode(int self, Simulator* sim)
        : self_(self),
          sim_(sim),
          rb_(RbEngine::Hooks{
              self, &sim->collection(),
              [this](const Message& m) { sim_->broadcast(self_, m); },
              [this](TraceEvent ev) { sim_->trace_event(std::move(ev)); },
              [this](const RbKey& k, const Value& v) { recrb_.on_rb_accept(k, v); }}),
          recrb_(RecRbEngine::Hooks{
              self, &sim->collection(),
              [this](const Message& m) { sim_->broadcast(self_, m); },
              [this](TraceEvent ev) { sim_->trace_event(std::move(ev)); },
              [this](const RecrbCtx& c, const Value& v) {
                  TraceEvent ev;
                  ev.kind = TraceKind::ACCEPT_COSEND;
                  ev.actor = self_;
                  ev.round = c.round;
                  ev.sender = c.sender;
                  ev.value = v;
                  sim_->trace_event(ev);
              },
              &rb_}) {}

    void on_deliver(int from, const Message& msg) override {
        switch (msg.type) {
            case MsgType::RbInitial:
            case MsgType::RbM1:
            case MsgType::RbM2:
                rb_.on_message(from, msg);
                break;
            case MsgType::RecrbPush:
                if (from == msg.sender) recrb_.on_push(RecrbCtx{msg.round, msg.sender}, msg);
                break;
            default:
                break;
        }
    }
    void on_new_output(const ProcessorSet& outputs) override { recrb_.on_new_output(outputs); }

    RbEngine& rb() { return rb_; }
    RecRbEngine& recrb() { return recrb_; }

  private:
    int self_;
    Simulator* sim_;
    RbEngine rb_;
    RecRbEngine recrb_;
};

struct BroadcastNet {
    std::unique_ptr<Simulator> sim;
    std::vector<BroadcastNode*> nodes;

    BroadcastNet(const BadSetCollection& coll, AdversaryPolicy policy, std::uint64_t seed) {
        sim = std::make_unique<Simulator>(coll, std::move(policy), seed);
        for (int p = 0; p < coll.universe_size(); ++p) {
            auto node = std::make_unique<BroadcastNode>(p, sim.get());
            nodes.push_back(node.get());
            sim->attach(p, std::move(node));
        }
    }
};

TamperScript catalog_script(int which, std::int64_t a, std::int64_t b, int n) {
    switch (which % 4) {
        case 0: { // equivocate by receiver half
            TamperSpec spec;
            spec.script = "equivocate-input";
            spec.value_a = a;
            spec.value_b = b;
            return make_tamper_script(spec, n);
        }
        case 1: { // equivocate from the seed stream
            TamperSpec spec;
            spec.script = "equivocate-input";
            spec.value_a = a;
            spec.value_b = b;
            spec.shuffle = true;
            return make_tamper_script(spec, n);
        }
        case 2: {
            TamperSpec spec;
            spec.script = "drop-all";
            return make_tamper_script(spec, n);
        }
        default: {
            TamperSpec spec;
            spec.script = "drop-then-recover";
            return make_tamper_script(spec, n);
        }
    }
}

// ---------------------------------------------------------------------------
// criterion 1: reliable broadcast under 500 seeded adversary schedules,
// threshold n=4 t=1 and the correlated collection {{0,1},{2,3},{4}} over n=6

bool criterion1() {
    auto start = Clock::now();
    Criterion c(1);

    auto run_family = [&](const BadSetCollection& coll,
                          const std::vector<ProcessorSet>& controlled_choices) {
        const int n = coll.universe_size();
        for (std::uint64_t seed = 1; seed <= 500 && c.ok; ++seed) {
            AdversaryPolicy policy;
            policy.controlled = controlled_choices[seed % controlled_choices.size()];
            policy.delay_spread = 3 + seed % 13;
            policy.extra_delay = [](std::uint64_t s, const Envelope& env) {
                return mix64(s, env.seq ^ 0xD1CEULL) % 23; // adversarial scheduling on everyone
            };
            for (int p : policy.controlled.to_vector())
                policy.scripts[p] = catalog_script(static_cast<int>(seed), 111, 222, n);

            BroadcastNet net(coll, policy, seed);
            for (int s = 0; s < n; ++s)
                net.nodes[s]->rb().invoke(RbKey{1, s, 1, s}, Value::integer(10 + s));
            net.sim->run_until([] { return false; }, 200000);
            net.sim->run_quiet_extension(200000);
            if (!net.sim->trace().header.completed) {
                c.fail("seed " + std::to_string(seed) + ": run did not drain");
                break;
            }

            auto reports = check_broadcast_properties(net.sim->trace(), coll);
            for (const char* id : {"RB1", "RB2", "RB3"}) {
                const auto* r = find_report(reports, id);
                if (!r || r->verdict != Verdict::PASS) {
                    c.fail("seed " + std::to_string(seed) + " " + id + " " +
                           (r ? std::string(verdict_name(r->verdict)) + " " + r->witness
                              : "missing"));
                }
            }
        }
    };

    auto threshold = BadSetCollection::threshold_collection(4, 1);
    run_family(threshold, {ProcessorSet{0}, ProcessorSet{1}, ProcessorSet{2}, ProcessorSet{3}});

    auto correlated = BadSetCollection::from_maximal_sets(
        6, {ProcessorSet{0, 1}, ProcessorSet{2, 3}, ProcessorSet{4}});
    run_family(correlated, {ProcessorSet{0, 1}, ProcessorSet{2, 3}, ProcessorSet{4}});

    double elapsed = seconds_since(start);
    if (elapsed >= 60.0) c.fail("runtime " + std::to_string(elapsed) + "s exceeds 60s");
    return c.finish(elapsed);
}

// ---------------------------------------------------------------------------
// criterion 2: recoverable broadcast — equivocation, silent senders, recovery

bool criterion2() {
    auto start = Clock::now();
    Criterion c(2);
    auto coll = BadSetCollection::threshold_collection(4, 1);
    const int t = 1;

    // 500 seeds of an equivocating controlled sender plus one silent sender
    for (std::uint64_t seed = 1; seed <= 500 && c.ok; ++seed) {
        int bad = static_cast<int>(seed % 4);
        int silent = (bad + 1) % 4;

        AdversaryPolicy policy;
        policy.controlled = ProcessorSet{bad};
        policy.delay_spread = 3 + seed % 11;
        TamperSpec spec;
        spec.script = "equivocate-input";
        spec.value_a = 5;
        spec.value_b = 6;
        spec.shuffle = (seed % 2) == 0;
        policy.scripts[bad] = make_tamper_script(spec, 4);

        BroadcastNet net(coll, policy, seed);
        for (int s = 0; s < 4; ++s) {
            if (s == silent) continue;
            net.nodes[s]->recrb().invoke(RecrbCtx{1, s}, Value::integer(5));
        }
        net.sim->run_until([] { return false; }, 300000);
        net.sim->run_quiet_extension(300000);

        auto reports = check_broadcast_properties(net.sim->trace(), coll);
        for (const char* id : {"RRB1", "RRB2", "RRB3"}) {
            const auto* r = find_report(reports, id);
            if (!r || r->verdict == Verdict::FAIL)
                c.fail("seed " + std::to_string(seed) + " " + id + ": " + (r ? r->witness : ""));
        }
        for (const auto& e : net.sim->trace().events)
            if (e.kind == TraceKind::ACCEPT_RECRB && e.sender == silent)
                c.fail("seed " + std::to_string(seed) + ": spurious accept for the silent sender");
        for (int p = 0; p < 4; ++p)
            if (net.nodes[p]->recrb().total_resends() > 2 * t)
                c.fail("seed " + std::to_string(seed) + ": resend bound exceeded");
    }

    // 100 seeds of the recovery path: the controlled sender's pushes are
    // removed until outputs release it
    for (std::uint64_t seed = 1; seed <= 100 && c.ok; ++seed) {
        int bad = static_cast<int>(seed % 4);
        AdversaryPolicy policy;
        policy.controlled = ProcessorSet{bad};
        policy.recovery_order = {bad};
        policy.delay_spread = 3 + seed % 7;
        TamperSpec spec;
        spec.script = "drop-then-recover";
        policy.scripts[bad] = make_tamper_script(spec, 4);

        BroadcastNet net(coll, policy, seed * 31 + 7);
        for (int s = 0; s < 4; ++s)
            net.nodes[s]->recrb().invoke(RecrbCtx{1, s}, Value::integer(40 + s));
        net.sim->run_until([] { return false; }, 300000);
        for (int p = 0; p < 4; ++p)
            if (p != bad) net.sim->register_output(p, Value::integer(0));
        if (!net.sim->recovered(bad)) {
            c.fail("seed " + std::to_string(seed) + ": sender not released at n-t outputs");
            break;
        }
        net.sim->run_until([] { return false; }, 600000);
        net.sim->run_quiet_extension(300000);

        for (int p = 0; p < 4 && c.ok; ++p) {
            auto acc = net.nodes[p]->recrb().accepted(RecrbCtx{1, bad});
            if (!acc)
                c.fail("seed " + std::to_string(seed) + ": processor " + std::to_string(p) +
                       " never accepted the recovered sender");
        }
        auto reports = check_broadcast_properties(net.sim->trace(), coll);
        const auto* rrb4 = find_report(reports, "RRB4");
        if (!rrb4 || rrb4->verdict != Verdict::PASS)
            c.fail("seed " + std::to_string(seed) + " RRB4: " + (rrb4 ? rrb4->witness : ""));
        if (net.nodes[bad]->recrb().total_resends() > 2 * t)
            c.fail("seed " + std::to_string(seed) + ": resend bound exceeded");
        if (net.nodes[bad]->recrb().resend_count(RecrbCtx{1, bad}) > t)
            c.fail("seed " + std::to_string(seed) + ": per-instance resends exceed t");
    }

    return c.finish(seconds_since(start));
}

// ---------------------------------------------------------------------------
// shared end-to-end runner for criteria 3/5

ScenarioResult equivocation_run(std::uint64_t seed) {
    Scenario sc;
    sc.n = 4;
    sc.threshold = 1;
    sc.controlled = ProcessorSet{1};
    sc.recovery_order = {1};
    TamperSpec spec;
    spec.processor = 1;
    spec.script = "equivocate-input";
    spec.value_a = 3;
    spec.value_b = 9;
    spec.targets_a = {0, 1};
    sc.tamper = {spec};
    sc.protocol = "epsilon-agreement";
    sc.interval_lo = 0;
    sc.interval_hi = 16;
    sc.inputs = {3, 3, 0, 16};
    sc.mode = "bimo";
    sc.seed = seed;
    sc.max_events = 400000;
    sc.quiet_extension = 400000;
    return run_scenario(sc);
}

// criterion 3: causal order over the end-to-end traces plus the blocked-gate
// scenario (tampered round-2 id set naming a never-broadcasting processor)

bool criterion3(const std::vector<ScenarioResult>& e2e_runs) {
    auto start = Clock::now();
    Criterion c(3);

    for (std::size_t i = 0; i < e2e_runs.size() && c.ok; ++i) {
        for (const char* id : {"CO1", "CO2", "CO3"}) {
            const auto* r = find_report(e2e_runs[i].reports, id);
            if (!r || r->verdict != Verdict::PASS)
                c.fail("e2e run " + std::to_string(i) + " " + id + ": " +
                       (r ? r->witness : "missing"));
        }
    }

    auto coll = BadSetCollection::threshold_collection(7, 2);
    for (std::uint64_t seed = 1; seed <= 100 && c.ok; ++seed) {
        AdversaryPolicy policy;
        policy.controlled = ProcessorSet{1, 2};
        policy.recovery_order = {2}; // processor 1 never recovers, never broadcasts
        policy.delay_spread = 3 + seed % 9;
        TamperSpec drop;
        drop.script = "drop-all";
        policy.scripts[1] = make_tamper_script(drop, 7);
        TamperSpec flip;
        flip.script = "flip-id-sets";
        flip.add_ids = {1};
        flip.round = 2;
        policy.scripts[2] = make_tamper_script(flip, 7);

        auto proto = make_flood(7);
        EngineSetup setup;
        setup.collection = &coll;
        setup.policy = policy;
        setup.seed = seed;
        setup.protocol = proto.get();
        setup.mode = EngineMode::BiSynch;
        for (int p = 0; p < 7; ++p) setup.inputs.push_back(Value::integer(p + 1));
        auto sim = make_engine_simulation(setup);
        TraceHeader& hdr = sim->trace().header;
        hdr.protocol = "flood";
        hdr.mode = "bisynch";
        hdr.inputs = {1, 2, 3, 4, 5, 6, 7};
        sim->start_all();
        ProcessorSet correct = ProcessorSet{1, 2}.complement(7);
        sim->run_until([&] { return correct.subset_of(sim->outputs()); }, 400000);
        sim->run_quiet_extension(400000);

        bool tampered_delivered = false;
        for (const auto& e : sim->trace().events) {
            if (e.kind == TraceKind::ACCEPT_COSEND && e.round >= 2 && e.value.is_id_set() &&
                e.value.as_id_set().contains(1))
                c.fail("seed " + std::to_string(seed) +
                       ": id set naming the silent processor was accepted at seq " +
                       std::to_string(e.seq));
            if (e.kind == TraceKind::DELIVER && e.from == 2 && e.round == 2 &&
                e.note == "recrb_push")
                tampered_delivered = true;
        }
        if (!tampered_delivered)
            c.fail("seed " + std::to_string(seed) + ": blocked-gate attack never exercised");

        auto reports = check_broadcast_properties(sim->trace(), coll);
        for (const char* id : {"CO1", "CO2", "CO3"}) {
            const auto* r = find_report(reports, id);
            if (!r || r->verdict == Verdict::FAIL)
                c.fail("seed " + std::to_string(seed) + " " + id + ": " + (r ? r->witness : ""));
        }
    }

    return c.finish(seconds_since(start));
}

// ---------------------------------------------------------------------------
// criterion 4: common core at n=4 and n=7, 200 seeds each

bool criterion4() {
    auto start = Clock::now();
    Criterion c(4);

    for (int n : {4, 7}) {
        const int t = (n - 1) / 3;
        auto coll = BadSetCollection::threshold_collection(n, t);
        for (std::uint64_t seed = 1; seed <= 200 && c.ok; ++seed) {
            AdversaryPolicy policy;
            int bad = static_cast<int>(seed % n);
            policy.controlled = ProcessorSet{bad};
            policy.recovery_order = {bad};
            policy.delay_spread = 3 + seed % 9;
            TamperSpec spec;
            spec.script = "equivocate-input";
            spec.value_a = 2;
            spec.value_b = 13;
            spec.shuffle = true;
            policy.scripts[bad] = make_tamper_script(spec, n);

            auto proto = make_epsilon_agreement(EpsilonAgreementConfig{0, 16}, n);
            EngineSetup setup;
            setup.collection = &coll;
            setup.policy = policy;
            setup.seed = seed * 977 + n;
            setup.protocol = proto.get();
            setup.mode = EngineMode::BiMo;
            for (int p = 0; p < n; ++p) setup.inputs.push_back(Value::integer((p * 5) % 17));
            auto sim = make_engine_simulation(setup);
            TraceHeader& hdr = sim->trace().header;
            hdr.protocol = "epsilon-agreement";
            hdr.mode = "bimo";
            hdr.interval_hi = 16;
            for (int p = 0; p < n; ++p) hdr.inputs.push_back((p * 5) % 17);
            sim->start_all();
            sim->run_until([&] { return sim->outputs().size() == n; }, 900000);
            sim->run_quiet_extension(900000);

            auto reports = check_common_core(sim->trace(), coll);
            for (const auto& r : reports)
                if (r.verdict != Verdict::PASS)
                    c.fail("n=" + std::to_string(n) + " seed " + std::to_string(seed) + " " +
                           r.id + " " + verdict_name(r.verdict) + " " + r.witness);
        }
    }

    return c.finish(seconds_since(start));
}

// ---------------------------------------------------------------------------
// criterion 5: end-to-end equivalence, 200 seeds, < 5 minutes

bool criterion5(std::vector<ScenarioResult>& keep_for_co) {
    auto start = Clock::now();
    Criterion c(5);

    for (std::uint64_t seed = 1; seed <= 200 && c.ok; ++seed) {
        ScenarioResult r = equivocation_run(seed);
        if (r.exit_code != kExitOk) {
            c.fail("seed " + std::to_string(seed) + ": exit " + std::to_string(r.exit_code) +
                   " " + r.error);
            break;
        }

        // all four registered outputs, pairwise adjacent, inside the hull of
        // the accepted round-1 values
        std::map<int, std::int64_t> outputs;
        std::int64_t alo = 99, ahi = -99;
        for (const auto& e : r.trace.events) {
            if (e.kind == TraceKind::OUTPUT && e.value.is_int()) outputs[e.actor] = e.value.as_int();
            if (e.kind == TraceKind::ACCEPT_COSEND && e.round == 1 && e.value.is_int()) {
                alo = std::min(alo, e.value.as_int());
                ahi = std::max(ahi, e.value.as_int());
            }
        }
        if (outputs.size() != 4) {
            c.fail("seed " + std::to_string(seed) + ": only " + std::to_string(outputs.size()) +
                   " outputs");
            break;
        }
        std::int64_t olo = 99, ohi = -99;
        for (const auto& [p, v] : outputs) {
            olo = std::min(olo, v);
            ohi = std::max(ohi, v);
        }
        if (ohi - olo > 1) c.fail("seed " + std::to_string(seed) + ": outputs not adjacent");
        if (olo < alo || ohi > ahi)
            c.fail("seed " + std::to_string(seed) + ": outputs leave the accepted-input hull");

        const auto* cuckoo = find_report(r.reports, "CUCKOO");
        if (!cuckoo || cuckoo->verdict != Verdict::PASS)
            c.fail("seed " + std::to_string(seed) + " CUCKOO: " + (cuckoo ? cuckoo->witness : ""));
        if (cuckoo && cuckoo->witness.find("p1") == std::string::npos &&
            cuckoo->witness.find("none") == std::string::npos)
            c.fail("seed " + std::to_string(seed) + ": witness does not isolate the controlled "
                   "processor: " + cuckoo->witness);
        const auto* replica = find_report(r.reports, "REPLICA_AGREEMENT");
        if (!replica || replica->verdict != Verdict::PASS)
            c.fail("seed " + std::to_string(seed) + " REPLICA_AGREEMENT: " +
                   (replica ? replica->witness : ""));

        // resend economy: each controlled processor re-pushes at most 2t times
        std::map<int, int> resends;
        for (const auto& e : r.trace.events)
            if (e.kind == TraceKind::RESEND) resends[e.actor] += 1;
        for (const auto& [p, count] : resends)
            if (count > 2)
                c.fail("seed " + std::to_string(seed) + ": processor " + std::to_string(p) +
                       " resent " + std::to_string(count) + " times");

        if (keep_for_co.size() < 25) keep_for_co.push_back(std::move(r));
    }

    double elapsed = seconds_since(start);
    if (elapsed >= 300.0) c.fail("runtime " + std::to_string(elapsed) + "s exceeds 5 minutes");
    return c.finish(elapsed);
}

// ---------------------------------------------------------------------------
// criterion 6: benign-model contraction, exhaustive small space + seeded n=7

bool criterion6() {
    auto start = Clock::now();
    Criterion c(6);

    auto check_run = [&c](const SyncProtocol& proto, const BenignOutcome& out, int n,
                          const std::string& label) {
        for (int r = 2; r <= proto.rounds() && c.ok; ++r) {
            bool first = true;
            Dyadic lo, hi, plo, phi;
            for (const auto& [p, v] : out.states.at(r)) {
                Dyadic d = v.to_rational();
                if (first || d < lo) lo = d;
                if (first || hi < d) hi = d;
                first = false;
            }
            first = true;
            for (const auto& [p, v] : out.states.at(r - 1)) {
                Dyadic d = v.to_rational();
                if (first || d < plo) plo = d;
                if (first || phi < d) phi = d;
                first = false;
            }
            Dyadic after = hi - lo;
            Dyadic doubled = after.exp > 0 ? Dyadic(after.num, after.exp - 1)
                                           : Dyadic(after.num * 2);
            if (!(doubled <= (phi - plo)))
                c.fail(label + ": diameter did not halve at round " + std::to_string(r));
        }
        std::int64_t olo = 1 << 20, ohi = -(1 << 20);
        for (const auto& [p, v] : out.outputs) {
            olo = std::min(olo, v.as_int());
            ohi = std::max(ohi, v.as_int());
        }
        if (static_cast<int>(out.outputs.size()) != n || ohi - olo > 1)
            c.fail(label + ": outputs not adjacent");
    };

    // exhaustive: n=4 t=1, interval [0,8] gives exactly 3 schedule rounds
    {
        auto proto = make_epsilon_agreement(EpsilonAgreementConfig{0, 8}, 4);
        std::map<int, Value> inputs = {{0, Value::integer(0)},
                                       {1, Value::integer(8)},
                                       {2, Value::integer(3)},
                                       {3, Value::integer(6)}};
        long checked = 0;
        for_each_core_schedule(4, 1, 3, [&](const auto& schedule) {
            if (!c.ok) return;
            BenignRun run;
            run.inputs = inputs;
            run.schedule = schedule;
            auto out = benign_oracle_run(*proto, run, 4, 1);
            check_run(*proto, out, 4, "exhaustive #" + std::to_string(checked));
            ++checked;
        });
        if (checked != 4L * 16 * 4 * 16 * 4 * 16)
            c.fail("exhaustive schedule space unexpectedly sized: " + std::to_string(checked));
    }

    // seeded: n=7 t=2, 1000 schedules
    {
        auto proto = make_epsilon_agreement(EpsilonAgreementConfig{0, 16}, 7);
        for (std::uint64_t seed = 1; seed <= 1000 && c.ok; ++seed) {
            SplitMix64 rng(seed * 131);
            std::map<int, Value> inputs;
            for (int p = 0; p < 7; ++p)
                inputs[p] = Value::integer(static_cast<std::int64_t>(rng.below(17)));
            BenignRun run = seeded_core_run(*proto, 7, 2, inputs, seed);
            auto out = benign_oracle_run(*proto, run, 7, 2);
            check_run(*proto, out, 7, "seed " + std::to_string(seed));
        }
    }

    return c.finish(seconds_since(start));
}

// ---------------------------------------------------------------------------
// criterion 7: predicate exhaustives against brute force over the closure

std::vector<ProcessorSet> closure_of(const BadSetCollection& c) {
    std::vector<ProcessorSet> bad;
    for (std::uint64_t bits = 0; bits < (1ULL << c.universe_size()); ++bits) {
        ProcessorSet s = ProcessorSet::from_bits(bits);
        for (const auto& m : c.maximal_sets())
            if (s.subset_of(m)) {
                bad.push_back(s);
                break;
            }
    }
    return bad;
}

bool brute_byzantine(const BadSetCollection& c, const std::vector<ProcessorSet>& bad) {
    ProcessorSet full = ProcessorSet::full(c.universe_size());
    for (std::size_t i = 0; i < bad.size(); ++i)
        for (std::size_t j = i; j < bad.size(); ++j) {
            ProcessorSet ij = bad[i].united(bad[j]);
            for (std::size_t k = j; k < bad.size(); ++k)
                if (ij.united(bad[k]) == full) return false;
        }
    return true;
}

bool criterion7() {
    auto start = Clock::now();
    Criterion c(7);
    long total = 0;
    const long cap = 10000;

    auto examine = [&](const BadSetCollection& coll) {
        ++total;
        auto bad = closure_of(coll);
        bool brute = brute_byzantine(coll, bad);
        if (coll.satisfies_byzantine_predicate() != brute) {
            c.fail("predicate disagrees with brute force on " +
                   std::to_string(coll.universe_size()) + " processors");
            return;
        }
        if (!brute) return;

        // corollaries over the full closure
        int n = coll.universe_size();
        std::vector<ProcessorSet> good;
        good.reserve(bad.size());
        for (const auto& b : bad) good.push_back(b.complement(n));
        for (const auto& g : good)
            for (const auto& bi : bad)
                for (const auto& bj : bad)
                    if (g.subset_of(bi.united(bj))) {
                        c.fail("good set covered by two bad sets at n=" + std::to_string(n));
                        return;
                    }
        for (const auto& gi : good)
            for (const auto& gj : good)
                if (!coll.exceeds_every_bad_set(gi.intersected(gj))) {
                    c.fail("good-set intersection inside a bad set at n=" + std::to_string(n));
                    return;
                }
    };

    // exhaustive antichain enumeration for n <= 5
    for (int n = 2; n <= 5 && c.ok; ++n) {
        std::vector<ProcessorSet> subsets;
        for (std::uint64_t bits = 0; bits + 1 < (1ULL << n); ++bits)
            subsets.push_back(ProcessorSet::from_bits(bits)); // excludes the full set
        std::vector<ProcessorSet> chosen;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (!c.ok || total >= cap) return;
            if (i == subsets.size()) {
                if (!chosen.empty())
                    examine(BadSetCollection::from_maximal_sets(n, chosen));
                return;
            }
            rec(i + 1);
            bool comparable = false;
            for (const auto& s : chosen)
                if (s.subset_of(subsets[i]) || subsets[i].subset_of(s)) comparable = true;
            if (!comparable) {
                chosen.push_back(subsets[i]);
                rec(i + 1);
                chosen.pop_back();
            }
        };
        rec(0);
    }

    // seeded antichain samples for n = 6 up to the overall cap
    SplitMix64 rng(4242);
    while (total < cap && c.ok) {
        int n = 6;
        std::vector<ProcessorSet> sets;
        int count = 1 + static_cast<int>(rng.below(5));
        for (int i = 0; i < count; ++i) {
            ProcessorSet s = ProcessorSet::from_bits(rng.next() & ((1ULL << n) - 1));
            if (s == ProcessorSet::full(n)) s.erase(static_cast<int>(rng.below(n)));
            sets.push_back(s);
        }
        examine(BadSetCollection::from_maximal_sets(n, sets));
    }

    if (c.ok && total < 5000) c.fail("covered only " + std::to_string(total) + " collections");
    c.detail = c.ok ? std::to_string(total) + " collections, zero disagreements" : c.detail;
    return c.finish(seconds_since(start));
}

// ---------------------------------------------------------------------------
// criterion 8: byte-identical traces for every bundled scenario

bool criterion8() {
    auto start = Clock::now();
    Criterion c(8);

    for (const char* name :
         {"benign_4_1.scenario", "equivocate_4_1.scenario", "blocked_gate_7_2.scenario",
          "flood_drop_4_1.scenario", "benign_7_2.scenario", "predicate_violation_3_1.scenario"}) {
        Scenario sc = Scenario::load(std::string(SCENARIO_DIR) + "/" + name);
        ScenarioResult a = run_scenario(sc);
        ScenarioResult b = run_scenario(sc);
        if (a.trace.to_string() != b.trace.to_string())
            c.fail(std::string(name) + ": traces differ between identical runs");
        if (a.exit_code != b.exit_code) c.fail(std::string(name) + ": exit codes differ");
    }

    return c.finish(seconds_since(start));
}

} // namespace

int main() {
    bool ok = true;
    std::vector<ScenarioResult> e2e_runs;

    ok &= criterion1();
    ok &= criterion2();
    ok &= criterion5(e2e_runs); // runs before 3, which audits its traces
    ok &= criterion3(e2e_runs);
    ok &= criterion4();
    ok &= criterion6();
    ok &= criterion7();
    ok &= criterion8();

    std::cout << (ok ? "ACCEPTANCE: all criteria PASS" : "ACCEPTANCE: FAILURES PRESENT") << "\n";
    return ok ? 0 : 1;
}
