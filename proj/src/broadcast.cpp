#include "cuckoo/broadcast.hpp"

#include <stdexcept>

namespace cuckoo {

// ---------------------------------------------------------------------------
// RbEngine

Message RbEngine::make(MsgType type, const RbKey& key, const Value& v) const {
    Message m;
    m.type = type;
    m.round = key.round;
    m.sender = key.sender;
    m.iter = key.iter;
    m.rb_sender = key.rb_sender;
    m.value = v;
    return m;
}

void RbEngine::invoke(const RbKey& key, const Value& v) {
    if (key.rb_sender != hooks_.self)
        throw std::logic_error("rb_invoke: only the instance sender may invoke");
    Instance& inst = inst_[key];
    if (inst.invoked) throw std::logic_error("rb_invoke: instance already invoked");
    inst.invoked = true;

    TraceEvent ev;
    ev.kind = TraceKind::INITIAL;
    ev.actor = hooks_.self;
    ev.round = key.round;
    ev.sender = key.sender;
    ev.iter = key.iter;
    ev.rb_sender = key.rb_sender;
    ev.value = v;
    hooks_.trace(ev);

    hooks_.broadcast(make(MsgType::RbInitial, key, v));
}

void RbEngine::on_message(int from, const Message& msg) {
    const RbKey key{msg.round, msg.sender, msg.iter, msg.rb_sender};
    Instance& inst = inst_[key];

    switch (msg.type) {
        case MsgType::RbInitial: {
            if (from != key.rb_sender) return; // identity is the envelope's from
            if (!inst.got_initial) {
                inst.got_initial = true;
                if (!inst.sent_m1) {
                    inst.sent_m1 = true;
                    TraceEvent ev;
                    ev.kind = TraceKind::M1;
                    ev.actor = hooks_.self;
                    ev.round = key.round;
                    ev.sender = key.sender;
                    ev.iter = key.iter;
                    ev.rb_sender = key.rb_sender;
                    ev.value = msg.value;
                    hooks_.trace(ev);
                    hooks_.broadcast(make(MsgType::RbM1, key, msg.value));
                }
            }
            break;
        }
        case MsgType::RbM1:
            inst.m1_support[msg.value].insert(from);
            break;
        case MsgType::RbM2:
            inst.m2_support[msg.value].insert(from);
            break;
        default:
            return;
    }
    progress(key, inst);
}

void RbEngine::progress(const RbKey& key, Instance& inst) {
    const BadSetCollection& coll = *hooks_.coll;

    if (!inst.sent_m2) {
        std::optional<Value> to_confirm;
        for (const auto& [v, supp] : inst.m1_support) {
            if (coll.contains_good_set(supp)) {
                to_confirm = v;
                break;
            }
        }
        if (!to_confirm) {
            for (const auto& [v, supp] : inst.m2_support) {
                if (coll.exceeds_every_bad_set(supp)) {
                    to_confirm = v;
                    break;
                }
            }
        }
        if (to_confirm) {
            inst.sent_m2 = true;
            TraceEvent ev;
            ev.kind = TraceKind::M2;
            ev.actor = hooks_.self;
            ev.round = key.round;
            ev.sender = key.sender;
            ev.iter = key.iter;
            ev.rb_sender = key.rb_sender;
            ev.value = *to_confirm;
            hooks_.trace(ev);
            hooks_.broadcast(make(MsgType::RbM2, key, *to_confirm));
            // our own m2 comes back through the network like everyone else's
        }
    }

    if (!inst.accepted) {
        for (const auto& [v, supp] : inst.m2_support) {
            if (coll.contains_good_set(supp)) {
                inst.accepted = v;
                TraceEvent ev;
                ev.kind = TraceKind::ACCEPT_RB;
                ev.actor = hooks_.self;
                ev.round = key.round;
                ev.sender = key.sender;
                ev.iter = key.iter;
                ev.rb_sender = key.rb_sender;
                ev.value = v;
                hooks_.trace(ev);
                hooks_.on_accept(key, v);
                break;
            }
        }
    }
}

std::optional<Value> RbEngine::accepted(const RbKey& key) const {
    auto it = inst_.find(key);
    return it == inst_.end() ? std::nullopt : it->second.accepted;
}

bool RbEngine::invoked(const RbKey& key) const {
    auto it = inst_.find(key);
    return it != inst_.end() && it->second.invoked;
}

// ---------------------------------------------------------------------------
// RecRbEngine

void RecRbEngine::invoke(const RecrbCtx& ctx, const Value& v) {
    Instance& inst = inst_[ctx];
    if (inst.is_sender) throw std::logic_error("recrb: duplicate invocation for context");
    inst.is_sender = true;
    inst.sender_active = true;
    inst.input = v;
    inst.cur_k = 1;

    Message push;
    push.type = MsgType::RecrbPush;
    push.round = ctx.round;
    push.sender = ctx.sender;
    push.iter = 1;
    push.value = v;
    inst.last_push = push;
    push_current(ctx, inst, /*resend=*/false);
}

void RecRbEngine::push_current(const RecrbCtx& ctx, Instance& inst, bool resend) {
    TraceEvent ev;
    ev.kind = resend ? TraceKind::RESEND : TraceKind::RECRB_PUSH;
    ev.actor = hooks_.self;
    ev.round = ctx.round;
    ev.sender = ctx.sender;
    ev.iter = inst.last_push.iter;
    ev.value = inst.last_push.value;
    hooks_.trace(ev);
    hooks_.broadcast(inst.last_push);
}

bool RecRbEngine::h_prev_subset(const std::vector<HEntry>& h_prev,
                                const std::map<int, Value>& h_at) const {
    for (const auto& e : h_prev) {
        auto it = h_at.find(e.reporter);
        if (it == h_at.end() || !(it->second == e.value)) return false;
    }
    return true;
}

void RecRbEngine::on_push(const RecrbCtx& ctx, const Message& push) {
    Instance& inst = inst_[ctx];
    inst.parked.push_back(push);
    process(ctx, inst);
}

void RecRbEngine::on_rb_accept(const RbKey& key, const Value& v) {
    const RecrbCtx ctx{key.round, key.sender};
    Instance& inst = inst_[ctx];
    auto& at_iter = inst.h[key.iter];
    if (!at_iter.emplace(key.rb_sender, v).second) return; // one accept per (k,q)
    process(ctx, inst);
}

void RecRbEngine::process(const RecrbCtx& ctx, Instance& inst) {
    const BadSetCollection& coll = *hooks_.coll;
    bool changed = true;
    while (changed) {
        changed = false;

        // acceptance: some iteration holds one value with good-set support
        if (!inst.accepted) {
            for (const auto& [k, entries] : inst.h) {
                std::map<Value, ProcessorSet> support;
                for (const auto& [q, val] : entries) support[val].insert(q);
                for (const auto& [val, supp] : support) {
                    if (coll.contains_good_set(supp)) {
                        inst.accepted = val;
                        if (inst.is_sender) inst.sender_active = false;
                        TraceEvent ev;
                        ev.kind = TraceKind::ACCEPT_RECRB;
                        ev.actor = hooks_.self;
                        ev.round = ctx.round;
                        ev.sender = ctx.sender;
                        ev.iter = k;
                        ev.value = val;
                        hooks_.trace(ev);
                        hooks_.on_accept(ctx, val);
                        changed = true;
                        break;
                    }
                }
                if (inst.accepted) break;
            }
        }

        // parked sender pushes whose claimed H[k-1] is now covered locally
        for (std::size_t i = 0; i < inst.parked.size();) {
            const Message& push = inst.parked[i];
            const int k = push.iter;
            if (k < 1) {
                inst.parked.erase(inst.parked.begin() + i);
                continue;
            }
            const auto& h_at = inst.h[k - 1];
            if (!h_prev_subset(push.h_prev, h_at)) {
                ++i;
                continue;
            }
            Message accepted_push = push;
            inst.parked.erase(inst.parked.begin() + i);
            changed = true;

            if (inst.invoked_iters.count(k)) continue; // one RB per iteration

            // Past the first iteration the snapshot must justify the sender's
            // advance: its reporters have to cover a good set. A stripped
            // history would dodge the conflict test below — with a full one,
            // any value that ever reaches good-set support in iteration k-1
            // shows up here with support beyond every bad set (two good sets
            // always intersect outside every bad set), so only that value can
            // be pushed onward.
            std::map<Value, ProcessorSet> support;
            ProcessorSet reporters;
            for (const auto& e : accepted_push.h_prev) {
                support[e.value].insert(e.reporter);
                reporters.insert(e.reporter);
            }
            if (k > 1 && !coll.contains_good_set(reporters)) continue;

            bool contradicted = false;
            for (const auto& [val, supp] : support) {
                if (!(val == accepted_push.value) && coll.exceeds_every_bad_set(supp)) {
                    contradicted = true;
                    break;
                }
            }
            if (contradicted) continue;

            inst.invoked_iters.insert(k);
            hooks_.rb->invoke(RbKey{ctx.round, ctx.sender, k, hooks_.self}, accepted_push.value);
        }

        // sender loop: advance the iteration once the current one has accepted
        // RBs from a set containing a good set
        if (inst.is_sender && inst.sender_active && !inst.accepted) {
            const auto& cur = inst.h[inst.cur_k];
            ProcessorSet reporters;
            for (const auto& [q, val] : cur) reporters.insert(q);
            if (coll.contains_good_set(reporters)) {
                std::map<Value, ProcessorSet> support;
                for (const auto& [q, val] : cur) support[val].insert(q);
                std::optional<Value> unique_strong;
                bool multiple = false;
                for (const auto& [val, supp] : support) {
                    if (coll.exceeds_every_bad_set(supp)) {
                        if (unique_strong) multiple = true;
                        else unique_strong = val;
                    }
                }
                Value next = (unique_strong && !multiple) ? *unique_strong : inst.input;

                std::vector<HEntry> snapshot;
                for (const auto& [q, val] : cur) snapshot.push_back(HEntry{q, val});

                inst.cur_k += 1;
                Message push;
                push.type = MsgType::RecrbPush;
                push.round = ctx.round;
                push.sender = ctx.sender;
                push.iter = inst.cur_k;
                push.value = next;
                push.h_prev = std::move(snapshot);
                inst.last_push = push;
                push_current(ctx, inst, /*resend=*/false);
                changed = true;
            }
        }
    }
}

void RecRbEngine::on_new_output(const ProcessorSet& outputs) {
    if (!hooks_.coll->contains_good_set(outputs)) return;
    for (auto& [ctx, inst] : inst_) {
        if (!inst.is_sender || !inst.sender_active) continue;
        inst.resend_count += 1;
        push_current(ctx, inst, /*resend=*/true);
    }
}

std::optional<Value> RecRbEngine::accepted(const RecrbCtx& ctx) const {
    auto it = inst_.find(ctx);
    return it == inst_.end() ? std::nullopt : it->second.accepted;
}

bool RecRbEngine::sender_active(const RecrbCtx& ctx) const {
    auto it = inst_.find(ctx);
    return it != inst_.end() && it->second.sender_active;
}

int RecRbEngine::resend_count(const RecrbCtx& ctx) const {
    auto it = inst_.find(ctx);
    return it == inst_.end() ? 0 : it->second.resend_count;
}

int RecRbEngine::total_resends() const {
    int total = 0;
    for (const auto& [ctx, inst] : inst_) total += inst.resend_count;
    return total;
}

} // namespace cuckoo
