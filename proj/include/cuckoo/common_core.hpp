#pragma once

#include <functional>
#include <map>

#include "cuckoo/adversary_structure.hpp"
#include "cuckoo/message.hpp"
#include "cuckoo/trace.hpp"

namespace cuckoo {

// Two-step set convergence for one round: broadcast the accepted-set snapshot,
// count peers whose claimed sets are covered by the live accepted set, repeat,
// and return the live set. The containment gate is what filters fabricated id
// sets from tampered messages: the live set only ever holds broadcast-accepted
// processors. Recovering processors do not resend here.
class CommonCoreInstance {
  public:
    struct Hooks {
        int self = -1;
        const BadSetCollection* coll = nullptr;
        std::function<void(const Message&)> broadcast;
        std::function<void(TraceEvent)> trace;
    };

    CommonCoreInstance() = default;
    explicit CommonCoreInstance(Hooks hooks) : hooks_(std::move(hooks)) {}

    void start(int round, const ProcessorSet& view_snapshot);
    void on_message(int from, const Message& msg); // Cc1 / Cc2, buffered in any phase

    // Re-evaluate both gates against the live accepted set. Returns true when
    // the phase advanced; result() is valid once done().
    bool poll(const ProcessorSet& live);

    bool started() const { return started_; }
    bool done() const { return done_; }
    const ProcessorSet& result() const { return result_; }
    const ProcessorSet& snapshot() const { return snapshot_; }

  private:
    Hooks hooks_;
    int round_ = -1;
    bool started_ = false;
    int phase_ = 0;
    bool done_ = false;
    ProcessorSet snapshot_;
    ProcessorSet result_;
    std::map<int, ProcessorSet> recv1_;
    std::map<int, ProcessorSet> recv2_;
};

} // namespace cuckoo
