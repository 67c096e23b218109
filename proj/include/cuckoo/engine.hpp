#pragma once

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "cuckoo/broadcast.hpp"
#include "cuckoo/common_core.hpp"
#include "cuckoo/sim_net.hpp"
#include "cuckoo/sync_protocol.hpp"

namespace cuckoo {

enum class EngineMode { BiSynch, BiMo };

// One processor of the round-lockstep emulation: runs a replica of the
// simulated protocol for every processor, drives its own round broadcasts
// through the causally-ordered recoverable broadcast, and (in BiMo mode) runs
// the two-step set convergence before each round broadcast.
//
// Bookkeeping mirrors the emulation's four structures:
//   unprocessed_   accepted broadcasts not yet applied to replicas
//   processed_     (round, processor) pairs already applied
//   accept_[r]     processors whose round-r broadcast was applied
//   outputs_local_ replicas that produced an output here
class EngineNode : public NodeHandler {
  public:
    EngineNode(int self, Simulator* sim, const SyncProtocol* protocol, Value input,
               EngineMode mode);

    void on_start() override;
    void on_deliver(int from, const Message& msg) override;
    void on_new_output(const ProcessorSet& outputs) override;

    int round() const { return round_; }
    bool halted() const { return halted_; }
    ProcessorSet accept_set(int r) const;
    std::map<int, Value> replica_outputs() const;
    const RecRbEngine& recrb() const { return recrb_; }

  private:
    struct Replica {
        bool started = false;
        bool dead = false; // invalid (replaced) input; never steps, never outputs
        int last_round = 0;
        std::map<int, Value> state;                    // state after each round
        std::map<int, std::map<int, Value>> outgoing;  // per-round sends
        std::optional<Value> output;
    };

    void drain();
    bool drain_pending_joins();
    bool drain_pending_accepts();
    bool drain_engine_queue();
    bool drain_round_progress();
    void process_triple(int r, int i, const Value& payload);
    void on_recrb_accept(const RecrbCtx& ctx, const Value& v);
    bool causal_ready(int r, const Value& v) const;
    CommonCoreInstance& cc_for(int r);

    int self_;
    Simulator* sim_;
    const SyncProtocol* protocol_;
    Value input_;
    EngineMode mode_;

    RbEngine rb_;
    RecRbEngine recrb_;

    struct PendingJoin {
        RecrbCtx ctx;
        Message push;
    };
    std::vector<PendingJoin> pending_joins_;
    struct PendingAccept {
        RecrbCtx ctx;
        Value value;
    };
    std::vector<PendingAccept> pending_accepts_;

    bool started_ = false;
    bool halted_ = false;
    int round_ = 1;
    std::vector<std::tuple<int, int, Value>> unprocessed_;
    std::set<std::pair<int, int>> processed_;
    std::map<int, ProcessorSet> accept_;
    std::set<int> outputs_local_;
    std::map<int, Replica> replicas_;
    std::map<int, CommonCoreInstance> cc_;
    std::set<int> advanced_rounds_;
};

// Convenience: build a full simulation (one EngineNode per processor) over a
// collection/policy, with per-processor inputs.
struct EngineSetup {
    const BadSetCollection* collection = nullptr;
    AdversaryPolicy policy;
    std::uint64_t seed = 1;
    const SyncProtocol* protocol = nullptr;
    std::vector<Value> inputs;
    EngineMode mode = EngineMode::BiSynch;
};

std::unique_ptr<Simulator> make_engine_simulation(const EngineSetup& setup);

} // namespace cuckoo
