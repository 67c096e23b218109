#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "cuckoo/adversary_structure.hpp"
#include "cuckoo/message.hpp"
#include "cuckoo/trace.hpp"

namespace cuckoo {

// Instance key for one reliable-broadcast run: processor `rb_sender` pushing a
// value inside iteration `iter` of the recoverable broadcast of context
// (round, sender).
struct RbKey {
    int round = 0;
    int sender = 0;
    int iter = 0;
    int rb_sender = 0;

    friend bool operator<(const RbKey& a, const RbKey& b) {
        if (a.round != b.round) return a.round < b.round;
        if (a.sender != b.sender) return a.sender < b.sender;
        if (a.iter != b.iter) return a.iter < b.iter;
        return a.rb_sender < b.rb_sender;
    }
    friend bool operator==(const RbKey& a, const RbKey& b) {
        return a.round == b.round && a.sender == b.sender && a.iter == b.iter &&
               a.rb_sender == b.rb_sender;
    }
};

struct RecrbCtx {
    int round = 0;
    int sender = 0;

    friend bool operator<(const RecrbCtx& a, const RecrbCtx& b) {
        if (a.round != b.round) return a.round < b.round;
        return a.sender < b.sender;
    }
    friend bool operator==(const RecrbCtx& a, const RecrbCtx& b) {
        return a.round == b.round && a.sender == b.sender;
    }
};

// Reliable broadcast per instance, generalized to a fault collection:
//
//   initial  -> every receiver echoes m1(v) once
//   m1(v) from a set containing a good set, OR m2(v) from a set not inside any
//   bad set  -> send m2(v) once
//   m2(v) from a set containing a good set -> accept v, at most once
//
// A reporter's identity is always the envelope's from field. A reporter whose
// tampered messages present two values for one kind counts once toward each
// value's tally; good-set gates keep that harmless.
class RbEngine {
  public:
    struct Hooks {
        int self = -1;
        const BadSetCollection* coll = nullptr;
        std::function<void(const Message&)> broadcast;
        std::function<void(TraceEvent)> trace;
        std::function<void(const RbKey&, const Value&)> on_accept;
    };

    explicit RbEngine(Hooks hooks) : hooks_(std::move(hooks)) {}

    // Sender side: key.rb_sender must equal self; double invocation rejected.
    void invoke(const RbKey& key, const Value& v);

    void on_message(int from, const Message& msg);

    std::optional<Value> accepted(const RbKey& key) const;
    bool invoked(const RbKey& key) const;

  private:
    struct Instance {
        bool invoked = false;
        bool got_initial = false;
        bool sent_m1 = false;
        bool sent_m2 = false;
        std::map<Value, ProcessorSet> m1_support;
        std::map<Value, ProcessorSet> m2_support;
        std::optional<Value> accepted;
    };

    void progress(const RbKey& key, Instance& inst);
    Message make(MsgType type, const RbKey& key, const Value& v) const;

    Hooks hooks_;
    std::map<RbKey, Instance> inst_;
};

// Recoverable reliable broadcast. The sender pushes <v, k, H[k-1]> until some
// iteration's accepted RBs carry one value with good-set support; participants
// validate each push against their own H before investing an RB of their own,
// and re-push on new global outputs so a recovered sender can complete.
class RecRbEngine {
  public:
    struct Hooks {
        int self = -1;
        const BadSetCollection* coll = nullptr;
        std::function<void(const Message&)> broadcast;
        std::function<void(TraceEvent)> trace;
        std::function<void(const RecrbCtx&, const Value&)> on_accept;
        RbEngine* rb = nullptr;
    };

    explicit RecRbEngine(Hooks hooks) : hooks_(std::move(hooks)) {}

    void invoke(const RecrbCtx& ctx, const Value& v);

    // A sender push that already passed the causal pre-join gate.
    void on_push(const RecrbCtx& ctx, const Message& push);

    void on_rb_accept(const RbKey& key, const Value& v);

    void on_new_output(const ProcessorSet& outputs);

    std::optional<Value> accepted(const RecrbCtx& ctx) const;
    bool sender_active(const RecrbCtx& ctx) const;
    int resend_count(const RecrbCtx& ctx) const;
    int total_resends() const;

  private:
    struct Instance {
        std::map<int, std::map<int, Value>> h; // h[k][reporter] = accepted RB value
        std::set<int> invoked_iters;
        std::vector<Message> parked; // pushes waiting for h_prev ⊆ h[k-1]
        std::optional<Value> accepted;

        bool is_sender = false;
        bool sender_active = false;
        Value input;
        int cur_k = 0;
        Message last_push;
        int resend_count = 0;
    };

    void process(const RecrbCtx& ctx, Instance& inst);
    bool h_prev_subset(const std::vector<HEntry>& h_prev,
                       const std::map<int, Value>& h_at) const;
    void push_current(const RecrbCtx& ctx, Instance& inst, bool resend);

    Hooks hooks_;
    std::map<RecrbCtx, Instance> inst_;
};

} // namespace cuckoo
