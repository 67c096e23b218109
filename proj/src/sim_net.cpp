#include "cuckoo/sim_net.hpp"

#include <stdexcept>

namespace cuckoo {

Simulator::Simulator(const BadSetCollection& collection, AdversaryPolicy policy, std::uint64_t seed)
    : collection_(collection), policy_(std::move(policy)), rng_(seed), seed_(seed) {
    nodes_.resize(collection_.universe_size());
    if (!collection_.is_bad(policy_.controlled))
        throw std::invalid_argument("controlled set " + policy_.controlled.to_string() +
                                    " is not a member of the fault collection");
    trace_.header.n = collection_.universe_size();
    trace_.header.threshold = collection_.threshold();
    trace_.header.maximal_sets = collection_.maximal_sets();
    trace_.header.controlled = policy_.controlled;
    trace_.header.recovery_order = policy_.recovery_order;
    trace_.header.seed = seed;
}

void Simulator::attach(int processor, std::unique_ptr<NodeHandler> handler) {
    if (processor < 0 || processor >= static_cast<int>(nodes_.size()))
        throw std::invalid_argument("attach: unknown processor " + std::to_string(processor));
    nodes_[processor] = std::move(handler);
}

void Simulator::start_all() {
    for (std::size_t p = 0; p < nodes_.size(); ++p) {
        if (!nodes_[p]) continue;
        in_handler_ = true;
        nodes_[p]->on_start();
        in_handler_ = false;
        process_pending_outputs();
    }
}

std::uint64_t Simulator::next_rank(std::uint64_t extra_delay) {
    std::uint64_t spread = quiet_ ? 1 : (policy_.delay_spread ? policy_.delay_spread : 1);
    std::uint64_t jitter = rng_.below(spread);
    if (quiet_) extra_delay = 0;
    return deliveries_ + 1 + jitter + extra_delay;
}

void Simulator::send(int from, int to, const Message& payload) {
    const int n = collection_.universe_size();
    if (from < 0 || from >= n || to < 0 || to >= n)
        throw std::invalid_argument("send: unknown processor id");

    Envelope env;
    env.from = from;
    env.to = to;
    env.payload = payload;
    env.sent_at = deliveries_;

    TraceEvent sendEv;
    sendEv.kind = TraceKind::SEND;
    sendEv.from = from;
    sendEv.to = to;
    sendEv.round = payload.round;
    sendEv.sender = payload.sender;
    sendEv.iter = payload.iter;
    sendEv.rb_sender = (payload.type == MsgType::RbInitial || payload.type == MsgType::RbM1 ||
                        payload.type == MsgType::RbM2)
                           ? payload.rb_sender
                           : -1;
    sendEv.digest = payload.digest();
    sendEv.note = msg_type_name(payload.type);
    trace_event(sendEv);
    env.seq = trace_.events.back().seq;

    std::uint64_t extra_delay = 0;
    if (policy_.extra_delay && !quiet_) extra_delay += policy_.extra_delay(seed_, env);
    if (policy_.controlled.contains(from) && !recovered_.contains(from)) {
        auto it = policy_.scripts.find(from);
        if (it != policy_.scripts.end()) {
            TamperAction act = it->second(seed_, env);
            if (quiet_ && act.kind == TamperAction::Kind::Replace) act = TamperAction::pass();
            switch (act.kind) {
                case TamperAction::Kind::Pass:
                    break;
                case TamperAction::Kind::Drop: {
                    TraceEvent ev;
                    ev.kind = TraceKind::DROP;
                    ev.from = from;
                    ev.to = to;
                    ev.ref = env.seq;
                    trace_event(ev);
                    return; // removed; no delivery will ever happen
                }
                case TamperAction::Kind::Replace: {
                    env.payload = act.replacement;
                    env.tampered = true;
                    extra_delay += act.extra_delay;
                    TraceEvent ev;
                    ev.kind = TraceKind::TAMPER;
                    ev.from = from;
                    ev.to = to;
                    ev.ref = env.seq;
                    ev.digest = env.payload.digest();
                    ev.note = msg_type_name(env.payload.type);
                    trace_event(ev);
                    break;
                }
            }
        }
    }

    queue_.emplace(std::make_pair(next_rank(extra_delay), env.seq), std::move(env));
}

void Simulator::broadcast(int from, const Message& payload) {
    for (int to = 0; to < collection_.universe_size(); ++to) send(from, to, payload);
}

StepResultKind Simulator::step() {
    if (queue_.empty()) return StepResultKind::Quiescent;
    auto it = queue_.begin();
    Envelope env = std::move(it->second);
    queue_.erase(it);
    ++deliveries_;

    TraceEvent ev;
    ev.kind = TraceKind::DELIVER;
    ev.from = env.from;
    ev.to = env.to;
    ev.ref = env.seq;
    ev.round = env.payload.round;
    ev.sender = env.payload.sender;
    ev.iter = env.payload.iter;
    ev.rb_sender = (env.payload.type == MsgType::RbInitial || env.payload.type == MsgType::RbM1 ||
                    env.payload.type == MsgType::RbM2)
                       ? env.payload.rb_sender
                       : -1;
    ev.digest = env.payload.digest();
    ev.note = msg_type_name(env.payload.type);
    trace_event(ev);

    if (nodes_[env.to]) {
        in_handler_ = true;
        nodes_[env.to]->on_deliver(env.from, env.payload);
        in_handler_ = false;
        process_pending_outputs();
    }
    return StepResultKind::Delivered;
}

void Simulator::register_output(int p, const Value& value) {
    if (p < 0 || p >= collection_.universe_size())
        throw std::invalid_argument("register_output: unknown processor");
    if (in_handler_) {
        pending_outputs_.emplace_back(p, value);
        return;
    }
    pending_outputs_.emplace_back(p, value);
    process_pending_outputs();
}

void Simulator::process_pending_outputs() {
    while (!pending_outputs_.empty()) {
        auto [p, value] = pending_outputs_.front();
        pending_outputs_.erase(pending_outputs_.begin());

        if (outputs_.contains(p)) {
            if (output_values_[p] != value) {
                TraceEvent ev;
                ev.kind = TraceKind::WARN;
                ev.actor = p;
                ev.note = "duplicate output registration with different value";
                trace_event(ev);
            }
            continue;
        }
        outputs_.insert(p);
        output_values_[p] = value;
        TraceEvent ev;
        ev.kind = TraceKind::OUTPUT;
        ev.actor = p;
        ev.value = value;
        trace_event(ev);

        // Model contract: once the registered outputs cover a good set, the next
        // processor in recovery_order that has not output is released for good.
        if (collection_.contains_good_set(outputs_)) {
            for (int candidate : policy_.recovery_order) {
                if (recovered_.contains(candidate)) continue;
                if (!policy_.controlled.contains(candidate)) continue;
                if (outputs_.contains(candidate)) continue;
                recovered_.insert(candidate);
                TraceEvent rev;
                rev.kind = TraceKind::RECOVER;
                rev.actor = candidate;
                trace_event(rev);
                break;
            }
        }

        for (std::size_t q = 0; q < nodes_.size(); ++q) {
            if (!nodes_[q]) continue;
            in_handler_ = true;
            nodes_[q]->on_new_output(outputs_);
            in_handler_ = false;
        }
    }
}

RunResult Simulator::run_until(const std::function<bool()>& stop, std::uint64_t max_events) {
    if (max_events == 0) throw std::invalid_argument("run_until: max_events must be positive");
    RunResult res;
    const std::uint64_t budget = deliveries_ + max_events;
    while (true) {
        if (stop && stop()) {
            res.reason = "stopped";
            break;
        }
        if (deliveries_ >= budget) {
            res.reason = "budget";
            break;
        }
        if (step() == StepResultKind::Quiescent) {
            res.reason = "quiescent";
            break;
        }
    }
    res.deliveries = deliveries_;
    return res;
}

void Simulator::run_quiet_extension(std::uint64_t max_events) {
    quiet_ = true;
    TraceEvent ev;
    ev.kind = TraceKind::QUIET;
    trace_event(ev);
    std::uint64_t budget = deliveries_ + max_events;
    while (deliveries_ < budget) {
        if (step() == StepResultKind::Quiescent) break;
    }
    trace_.header.completed = queue_.empty();
}

void Simulator::trace_event(TraceEvent ev) {
    ev.seq = ++event_seq_;
    ev.time = deliveries_;
    trace_.events.push_back(std::move(ev));
}

} // namespace cuckoo
