#pragma once

#include <functional>
#include <memory>

#include "cuckoo/processor_set.hpp"
#include "cuckoo/rng.hpp"
#include "cuckoo/sync_protocol.hpp"

namespace cuckoo {

struct EpsilonAgreementConfig {
    std::int64_t lo = 0;
    std::int64_t hi = 16;

    // Horizon: one midpoint application per round from round 2 on halves the
    // value diameter, so ceil(log2(hi-lo)) transitions land every pair of
    // values within distance 1 before the output round.
    int rounds() const;
};

// Midpoint approximate agreement on an integer interval. Values travel as
// exact dyadic rationals and are floored to an integer only at the output
// round, so replicas agree bit-for-bit.
std::unique_ptr<SyncProtocol> make_epsilon_agreement(const EpsilonAgreementConfig& cfg, int n);

// Two-round smoke protocol: output the sorted multiset of round-1 inputs seen.
std::unique_ptr<SyncProtocol> make_flood(int n);

struct BenignRun {
    std::map<int, Value> inputs;
    // schedule[round][processor] = set the processor receives from in that
    // round, for rounds 1 .. protocol.rounds()-1
    std::map<int, std::map<int, ProcessorSet>> schedule;
};

struct BenignOutcome {
    std::map<int, Value> outputs;
    // states[round][processor], rounds 1 .. protocol.rounds()
    std::map<int, std::map<int, Value>> states;
};

// Direct execution in the synchronous benign model: no broadcast stack, no
// network. This is the independent oracle the Byzantine-side runs are
// compared against. Rejects schedules whose receive sets fall below n-t.
BenignOutcome benign_oracle_run(const SyncProtocol& protocol, const BenignRun& run, int n, int t);

// Omission schedules whose per-round views all share a core of n-t ids, the
// guarantee the two-step set-convergence layer provides.
BenignRun seeded_core_run(const SyncProtocol& protocol, int n, int t,
                          const std::map<int, Value>& inputs, std::uint64_t seed);

// Visit every schedule of the exhaustive family for small n: per round a core
// of size n-t plus any combination of per-processor extras.
void for_each_core_schedule(int n, int t, int schedule_rounds,
                            const std::function<void(const std::map<int, std::map<int, ProcessorSet>>&)>& fn);

} // namespace cuckoo
