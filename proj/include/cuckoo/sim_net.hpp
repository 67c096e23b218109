#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "cuckoo/adversary_structure.hpp"
#include "cuckoo/message.hpp"
#include "cuckoo/rng.hpp"
#include "cuckoo/trace.hpp"

namespace cuckoo {

struct Envelope {
    std::uint64_t seq = 0; // equals the seq of the SEND trace event
    int from = -1;
    int to = -1;
    Message payload;
    bool tampered = false;
    std::uint64_t sent_at = 0;
};

struct TamperAction {
    enum class Kind { Pass, Drop, Replace } kind = Kind::Pass;
    Message replacement;
    std::uint64_t extra_delay = 0;

    static TamperAction pass() { return {}; }
    static TamperAction drop() { return {Kind::Drop, {}, 0}; }
    static TamperAction replace(Message m, std::uint64_t delay = 0) {
        return {Kind::Replace, std::move(m), delay};
    }
};

// Deterministic function of (seed, envelope) deciding what happens to one
// outgoing message of a controlled processor.
using TamperScript =
    std::function<TamperAction(std::uint64_t seed, const Envelope& plain)>;

struct AdversaryPolicy {
    ProcessorSet controlled;
    std::map<int, TamperScript> scripts; // per controlled processor
    std::vector<int> recovery_order;     // released one by one as outputs arrive
    std::uint64_t delay_spread = 8;      // max extra delivery jitter for any envelope
    // optional scheduling power over any envelope, controlled or not; must be
    // a deterministic function of (seed, envelope)
    std::function<std::uint64_t(std::uint64_t seed, const Envelope&)> extra_delay;
};

// Protocol code attached to one physical processor. Handlers run synchronously
// from the event loop and emit through Simulator::send / register_output.
class NodeHandler {
  public:
    virtual ~NodeHandler() = default;
    virtual void on_start() {}
    virtual void on_deliver(int from, const Message& msg) = 0;
    // Called once per processor added to the global output registry.
    virtual void on_new_output(const ProcessorSet& /*outputs*/) {}
};

enum class StepResultKind { Delivered, Quiescent };

struct RunResult {
    std::string reason; // "stopped" | "quiescent" | "budget"
    std::uint64_t deliveries = 0;
};

// Single-threaded discrete-event asynchronous network. Delivery order is a
// deterministic function of (scenario, seed): ranks come from a seeded stream
// at send time, ties break by send seq.
class Simulator {
  public:
    Simulator(const BadSetCollection& collection, AdversaryPolicy policy, std::uint64_t seed);

    void attach(int processor, std::unique_ptr<NodeHandler> handler);
    void start_all();

    int universe_size() const { return collection_.universe_size(); }
    const BadSetCollection& collection() const { return collection_; }

    // Enqueue an envelope; applies the tamper script when `from` is controlled
    // and not yet recovered. Rejects unknown processor ids.
    void send(int from, int to, const Message& payload);

    void broadcast(int from, const Message& payload);

    // Deliver the minimum-rank pending envelope, or report quiescence.
    StepResultKind step();

    // Record that simulated processor `p` produced `value`. First registration
    // wins; later detections of the same output are deduplicated. May trigger a
    // recovery and the per-output resend notifications.
    void register_output(int p, const Value& value);

    RunResult run_until(const std::function<bool()>& stop, std::uint64_t max_events);

    // Fault-quiet tail: no further tampering, prompt delivery; drop rules keep
    // applying to still-unrecovered controlled senders. Drains the queue.
    void run_quiet_extension(std::uint64_t max_events);

    void trace_event(TraceEvent ev); // fills seq/time
    Trace& trace() { return trace_; }
    const Trace& trace() const { return trace_; }

    const ProcessorSet& outputs() const { return outputs_; }
    const std::map<int, Value>& output_values() const { return output_values_; }
    bool recovered(int p) const { return recovered_.contains(p); }
    ProcessorSet live_controlled() const { return policy_.controlled.minus(recovered_); }
    std::uint64_t deliveries() const { return deliveries_; }
    bool queue_empty() const { return queue_.empty(); }

  private:
    void process_pending_outputs();
    std::uint64_t next_rank(std::uint64_t extra_delay);

    BadSetCollection collection_;
    AdversaryPolicy policy_;
    SplitMix64 rng_;
    std::uint64_t seed_ = 0;

    std::vector<std::unique_ptr<NodeHandler>> nodes_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, Envelope> queue_; // (rank, seq) -> envelope
    std::uint64_t deliveries_ = 0;
    std::uint64_t event_seq_ = 0;

    ProcessorSet outputs_;
    std::map<int, Value> output_values_;
    ProcessorSet recovered_;
    std::vector<std::pair<int, Value>> pending_outputs_;
    bool in_handler_ = false;
    bool quiet_ = false;

    Trace trace_;
};

} // namespace cuckoo
