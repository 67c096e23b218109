#include "cuckoo/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuckoo {

EngineNode::EngineNode(int self, Simulator* sim, const SyncProtocol* protocol, Value input,
                       EngineMode mode)
    : self_(self),
      sim_(sim),
      protocol_(protocol),
      input_(std::move(input)),
      mode_(mode),
      rb_(RbEngine::Hooks{
          self,
          &sim->collection(),
          [this](const Message& m) { sim_->broadcast(self_, m); },
          [this](TraceEvent ev) { sim_->trace_event(std::move(ev)); },
          [this](const RbKey& key, const Value& v) { recrb_.on_rb_accept(key, v); },
      }),
      recrb_(RecRbEngine::Hooks{
          self,
          &sim->collection(),
          [this](const Message& m) { sim_->broadcast(self_, m); },
          [this](TraceEvent ev) { sim_->trace_event(std::move(ev)); },
          [this](const RecrbCtx& ctx, const Value& v) { on_recrb_accept(ctx, v); },
          &rb_,
      }) {}

void EngineNode::on_start() {
    if (started_) throw std::logic_error("engine already started");
    started_ = true;
    round_ = 1;
    recrb_.invoke(RecrbCtx{1, self_}, input_);
    drain();
}

void EngineNode::on_deliver(int from, const Message& msg) {
    switch (msg.type) {
        case MsgType::RbInitial:
        case MsgType::RbM1:
        case MsgType::RbM2:
            rb_.on_message(from, msg);
            break;
        case MsgType::RecrbPush:
            // the context's sender identity is the wire sender; mismatches are
            // tampered claims about someone else's broadcast
            if (from != msg.sender) return;
            pending_joins_.push_back(PendingJoin{RecrbCtx{msg.round, msg.sender}, msg});
            break;
        case MsgType::Cc1:
        case MsgType::Cc2:
            cc_for(msg.round).on_message(from, msg);
            break;
    }
    drain();
}

void EngineNode::on_new_output(const ProcessorSet& outputs) {
    recrb_.on_new_output(outputs);
    drain();
}

CommonCoreInstance& EngineNode::cc_for(int r) {
    auto it = cc_.find(r);
    if (it == cc_.end()) {
        it = cc_.emplace(r, CommonCoreInstance(CommonCoreInstance::Hooks{
                                self_,
                                &sim_->collection(),
                                [this](const Message& m) { sim_->broadcast(self_, m); },
                                [this](TraceEvent ev) { sim_->trace_event(std::move(ev)); },
                            }))
                 .first;
    }
    return it->second;
}

void EngineNode::on_recrb_accept(const RecrbCtx& ctx, const Value& v) {
    pending_accepts_.push_back(PendingAccept{ctx, v});
}

bool EngineNode::causal_ready(int r, const Value& v) const {
    if (r <= 1) return true;
    if (!v.is_id_set()) return false; // malformed; blocked for good
    for (int q : v.as_id_set().to_vector())
        if (!processed_.count({r - 1, q})) return false;
    return true;
}

void EngineNode::drain() {
    bool changed = true;
    while (changed) {
        changed = false;
        changed |= drain_pending_joins();
        changed |= drain_pending_accepts();
        changed |= drain_engine_queue();
        changed |= drain_round_progress();
    }
}

bool EngineNode::drain_pending_joins() {
    bool changed = false;
    for (std::size_t i = 0; i < pending_joins_.size();) {
        const PendingJoin& pj = pending_joins_[i];
        const int r = pj.ctx.round;
        bool ready;
        if (r <= 1) {
            ready = true;
        } else {
            ready = pj.push.value.is_id_set() && pj.push.value.as_id_set().contains(pj.ctx.sender) &&
                    causal_ready(r, pj.push.value);
        }
        if (!ready) {
            ++i;
            continue;
        }
        PendingJoin take = pending_joins_[i];
        pending_joins_.erase(pending_joins_.begin() + i);
        recrb_.on_push(take.ctx, take.push);
        changed = true;
    }
    return changed;
}

bool EngineNode::drain_pending_accepts() {
    bool changed = false;
    for (std::size_t i = 0; i < pending_accepts_.size();) {
        const PendingAccept& pa = pending_accepts_[i];
        if (!causal_ready(pa.ctx.round, pa.value)) {
            ++i;
            continue;
        }
        PendingAccept take = pending_accepts_[i];
        pending_accepts_.erase(pending_accepts_.begin() + i);

        TraceEvent ev;
        ev.kind = TraceKind::ACCEPT_COSEND;
        ev.actor = self_;
        ev.round = take.ctx.round;
        ev.sender = take.ctx.sender;
        ev.value = take.value;
        sim_->trace_event(ev);

        unprocessed_.emplace_back(take.ctx.round, take.ctx.sender, take.value);
        changed = true;
    }
    return changed;
}

bool EngineNode::drain_engine_queue() {
    if (unprocessed_.empty()) return false;
    std::sort(unprocessed_.begin(), unprocessed_.end(),
              [](const auto& a, const auto& b) {
                  if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
                  return std::get<1>(a) < std::get<1>(b);
              });
    auto work = std::move(unprocessed_);
    unprocessed_.clear();
    for (const auto& [r, i, payload] : work) process_triple(r, i, payload);
    return true;
}

void EngineNode::process_triple(int r, int i, const Value& payload) {
    Replica& rep = replicas_[i];
    if (r == 1) {
        rep.started = true;
        rep.last_round = 1;
        if (!protocol_->validate_input(payload)) {
            rep.dead = true;
            TraceEvent ev;
            ev.kind = TraceKind::WARN;
            ev.actor = self_;
            ev.sender = i;
            ev.note = "replica input rejected by protocol: " + payload.brief();
            sim_->trace_event(ev);
        } else {
            rep.state[1] = protocol_->initial(payload);
            for (int q = 0; q < sim_->universe_size(); ++q) rep.outgoing[1][q] = payload;
            TraceEvent ev;
            ev.kind = TraceKind::SM_INIT;
            ev.actor = self_;
            ev.sender = i;
            ev.round = 1;
            ev.digest = digest_of(rep.state[1]);
            sim_->trace_event(ev);
        }
    } else {
        if (!payload.is_id_set())
            throw std::logic_error("engine: processed round>1 payload is not an id set");
        if (rep.last_round != r - 1 && !rep.dead)
            throw std::logic_error("engine: replica advanced out of order");
        if (!rep.dead) {
            std::map<int, Value> received;
            for (int j : payload.as_id_set().to_vector()) {
                auto jt = replicas_.find(j);
                if (jt == replicas_.end() || !jt->second.started)
                    throw std::logic_error("engine: causal predecessor replica missing");
                if (jt->second.dead) continue;
                auto& out = jt->second.outgoing[r - 1];
                auto vit = out.find(i); // the value j addressed to replica i, if any
                if (vit != out.end()) received[j] = vit->second;
            }
            ProtocolStep st = protocol_->step(received, rep.state[r - 1], r);
            rep.state[r] = st.state;
            rep.outgoing[r] = st.sends;
            rep.last_round = r;

            TraceEvent ev;
            ev.kind = TraceKind::SM_STEP;
            ev.actor = self_;
            ev.sender = i;
            ev.round = r;
            ev.digest = digest_of(rep.state[r]);
            sim_->trace_event(ev);

            if (st.output && !rep.output) {
                rep.output = st.output;
                TraceEvent oev;
                oev.kind = TraceKind::SM_OUTPUT;
                oev.actor = self_;
                oev.sender = i;
                oev.round = r;
                oev.value = *st.output;
                sim_->trace_event(oev);
                if (!outputs_local_.count(i)) {
                    outputs_local_.insert(i);
                    sim_->register_output(i, *st.output);
                }
                if (i == self_) halted_ = true;
            }
        } else {
            rep.last_round = r;
        }
    }
    processed_.insert({r, i});
    accept_[r].insert(i);
}

bool EngineNode::drain_round_progress() {
    if (!started_ || halted_) return false;
    const int r = round_;
    if (advanced_rounds_.count(r)) return false;
    const ProcessorSet& acc = accept_[r];
    if (!sim_->collection().contains_good_set(acc) || !acc.contains(self_)) return false;

    if (mode_ == EngineMode::BiMo) {
        CommonCoreInstance& cc = cc_for(r);
        bool advanced = false;
        if (!cc.started()) {
            cc.start(r, acc);
            advanced = true;
        }
        advanced |= cc.poll(accept_[r]);
        if (!cc.done()) return advanced;
    }

    advanced_rounds_.insert(r);
    Value view = Value::id_set(accept_[r]);
    round_ = r + 1;

    TraceEvent ev;
    ev.kind = TraceKind::ROUND_ADVANCE;
    ev.actor = self_;
    ev.round = round_;
    sim_->trace_event(ev);

    recrb_.invoke(RecrbCtx{round_, self_}, view);
    return true;
}

ProcessorSet EngineNode::accept_set(int r) const {
    auto it = accept_.find(r);
    return it == accept_.end() ? ProcessorSet{} : it->second;
}

std::map<int, Value> EngineNode::replica_outputs() const {
    std::map<int, Value> out;
    for (const auto& [i, rep] : replicas_)
        if (rep.output) out[i] = *rep.output;
    return out;
}

std::unique_ptr<Simulator> make_engine_simulation(const EngineSetup& setup) {
    auto sim = std::make_unique<Simulator>(*setup.collection, setup.policy, setup.seed);
    const int n = setup.collection->universe_size();
    if (static_cast<int>(setup.inputs.size()) != n)
        throw std::invalid_argument("engine setup needs one input per processor");
    for (int p = 0; p < n; ++p)
        sim->attach(p, std::make_unique<EngineNode>(p, sim.get(), setup.protocol, setup.inputs[p],
                                                    setup.mode));
    return sim;
}

} // namespace cuckoo
