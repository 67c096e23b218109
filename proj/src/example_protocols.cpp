#include "cuckoo/example_protocols.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo {

int EpsilonAgreementConfig::rounds() const {
    std::int64_t width = hi - lo;
    int halvings = 0;
    std::int64_t span = 1;
    while (span < width) {
        span <<= 1;
        ++halvings;
    }
    return std::max(2, halvings + 1);
}

namespace {

class EpsilonAgreement final : public SyncProtocol {
  public:
    EpsilonAgreement(EpsilonAgreementConfig cfg, int n) : cfg_(cfg), n_(n) {
        if (cfg_.hi <= cfg_.lo) throw std::invalid_argument("interval must have hi > lo");
    }

    std::string name() const override { return "epsilon-agreement"; }
    int rounds() const override { return cfg_.rounds(); }

    bool validate_input(const Value& input) const override {
        return input.is_int() && input.as_int() >= cfg_.lo && input.as_int() <= cfg_.hi;
    }

    Value initial(const Value& input) const override {
        if (!validate_input(input))
            throw std::invalid_argument("epsilon-agreement input outside interval: " + input.brief());
        return Value::rational(Dyadic(input.as_int()));
    }

    ProtocolStep step(const std::map<int, Value>& received, const Value& state,
                      int round) const override {
        Dyadic mid = state.to_rational();
        bool have = false;
        Dyadic lo_seen, hi_seen;
        for (const auto& [from, v] : received) {
            if (!v.is_int() && !v.is_rational()) continue;
            Dyadic d = v.to_rational();
            if (!have || d < lo_seen) lo_seen = d;
            if (!have || hi_seen < d) hi_seen = d;
            have = true;
        }
        if (have) mid = Dyadic::midpoint(lo_seen, hi_seen);

        ProtocolStep out;
        out.state = Value::rational(mid);
        if (round >= rounds()) {
            out.output = Value::integer(mid.floor());
        } else {
            for (int q = 0; q < n_; ++q) out.sends[q] = out.state;
        }
        return out;
    }

  private:
    EpsilonAgreementConfig cfg_;
    int n_;
};

class FloodProtocol final : public SyncProtocol {
  public:
    explicit FloodProtocol(int n) : n_(n) {}

    std::string name() const override { return "flood"; }
    int rounds() const override { return 2; }
    bool validate_input(const Value& input) const override { return input.is_int(); }

    Value initial(const Value& input) const override {
        if (!validate_input(input)) throw std::invalid_argument("flood input must be an integer");
        return input;
    }

    ProtocolStep step(const std::map<int, Value>& received, const Value& state,
                      int round) const override {
        ProtocolStep out;
        out.state = state;
        if (round >= 2) {
            std::vector<std::int64_t> seen;
            for (const auto& [from, v] : received)
                if (v.is_int()) seen.push_back(v.as_int());
            std::sort(seen.begin(), seen.end());
            out.output = Value::int_list(std::move(seen));
        }
        return out;
    }

  private:
    int n_;
};

} // namespace

std::unique_ptr<SyncProtocol> make_epsilon_agreement(const EpsilonAgreementConfig& cfg, int n) {
    return std::make_unique<EpsilonAgreement>(cfg, n);
}

std::unique_ptr<SyncProtocol> make_flood(int n) { return std::make_unique<FloodProtocol>(n); }

BenignOutcome benign_oracle_run(const SyncProtocol& protocol, const BenignRun& run, int n, int t) {
    const int R = protocol.rounds();
    for (int r = 1; r < R; ++r) {
        auto rit = run.schedule.find(r);
        if (rit == run.schedule.end())
            throw std::invalid_argument("schedule missing round " + std::to_string(r));
        for (int p = 0; p < n; ++p) {
            auto pit = rit->second.find(p);
            if (pit == rit->second.end() || pit->second.size() < n - t)
                throw std::invalid_argument("schedule round " + std::to_string(r) +
                                            " gives processor " + std::to_string(p) +
                                            " fewer than n-t messages");
        }
    }

    BenignOutcome out;
    std::map<int, std::map<int, std::map<int, Value>>> outgoing; // [round][proc][receiver]
    for (int p = 0; p < n; ++p) {
        auto it = run.inputs.find(p);
        if (it == run.inputs.end()) throw std::invalid_argument("missing input for processor");
        out.states[1][p] = protocol.initial(it->second);
        for (int q = 0; q < n; ++q) outgoing[1][p][q] = it->second;
    }
    for (int r = 2; r <= R; ++r) {
        for (int p = 0; p < n; ++p) {
            std::map<int, Value> received;
            for (int j : run.schedule.at(r - 1).at(p).to_vector()) {
                auto jt = outgoing[r - 1][j].find(p);
                if (jt != outgoing[r - 1][j].end()) received[j] = jt->second;
            }
            ProtocolStep st = protocol.step(received, out.states[r - 1][p], r);
            out.states[r][p] = st.state;
            outgoing[r][p] = st.sends;
            if (st.output && !out.outputs.count(p)) out.outputs[p] = *st.output;
        }
    }
    return out;
}

BenignRun seeded_core_run(const SyncProtocol& protocol, int n, int t,
                          const std::map<int, Value>& inputs, std::uint64_t seed) {
    SplitMix64 rng(seed);
    BenignRun run;
    run.inputs = inputs;
    for (int r = 1; r < protocol.rounds(); ++r) {
        ProcessorSet core = ProcessorSet::full(n);
        while (core.size() > n - t) {
            auto members = core.to_vector();
            core.erase(members[rng.below(members.size())]);
        }
        for (int p = 0; p < n; ++p) {
            ProcessorSet view = core;
            view.insert(p);
            for (int q = 0; q < n; ++q)
                if (!view.contains(q) && (rng.next() & 1)) view.insert(q);
            run.schedule[r][p] = view;
        }
    }
    return run;
}

void for_each_core_schedule(
    int n, int t, int schedule_rounds,
    const std::function<void(const std::map<int, std::map<int, ProcessorSet>>&)>& fn) {
    // enumerate cores: all subsets of size n-t
    std::vector<ProcessorSet> cores;
    for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
        ProcessorSet s = ProcessorSet::from_bits(bits);
        if (s.size() == n - t) cores.push_back(s);
    }
    const std::uint64_t extras_space = 1ULL << n; // per round: processor p keeps its extras or not
    std::map<int, std::map<int, ProcessorSet>> schedule;

    std::function<void(int)> rec = [&](int r) {
        if (r > schedule_rounds) {
            fn(schedule);
            return;
        }
        for (const auto& core : cores) {
            for (std::uint64_t extras = 0; extras < extras_space; ++extras) {
                for (int p = 0; p < n; ++p) {
                    ProcessorSet view = core;
                    view.insert(p);
                    if ((extras >> p) & 1) view = ProcessorSet::full(n);
                    schedule[r][p] = view;
                }
                rec(r + 1);
            }
        }
    };
    rec(1);
}

} // namespace cuckoo
