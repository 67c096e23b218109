#include "cuckoo/common_core.hpp"

#include <stdexcept>

namespace cuckoo {

void CommonCoreInstance::start(int round, const ProcessorSet& view_snapshot) {
    if (started_) throw std::logic_error("common core round already started");
    if (!hooks_.coll->contains_good_set(view_snapshot))
        throw std::logic_error("common core started with a view lacking a good set");
    started_ = true;
    round_ = round;
    phase_ = 1;
    snapshot_ = view_snapshot;

    TraceEvent ev;
    ev.kind = TraceKind::CC1;
    ev.actor = hooks_.self;
    ev.round = round;
    ev.value = Value::id_set(view_snapshot);
    hooks_.trace(ev);

    Message m;
    m.type = MsgType::Cc1;
    m.round = round;
    m.sender = hooks_.self;
    m.value = Value::id_set(view_snapshot);
    hooks_.broadcast(m);
}

void CommonCoreInstance::on_message(int from, const Message& msg) {
    if (!msg.value.is_id_set()) return; // malformed tamper; a missing vote, nothing more
    if (msg.type == MsgType::Cc1)
        recv1_.emplace(from, msg.value.as_id_set());
    else if (msg.type == MsgType::Cc2)
        recv2_.emplace(from, msg.value.as_id_set());
}

bool CommonCoreInstance::poll(const ProcessorSet& live) {
    if (!started_ || done_) return false;
    bool advanced = false;

    if (phase_ == 1) {
        ProcessorSet covered;
        for (const auto& [j, s] : recv1_)
            if (s.subset_of(live)) covered.insert(j);
        if (hooks_.coll->contains_good_set(covered)) {
            phase_ = 2;
            advanced = true;
            TraceEvent ev;
            ev.kind = TraceKind::CC2;
            ev.actor = hooks_.self;
            ev.round = round_;
            ev.value = Value::id_set(live);
            hooks_.trace(ev);

            Message m;
            m.type = MsgType::Cc2;
            m.round = round_;
            m.sender = hooks_.self;
            m.value = Value::id_set(live);
            hooks_.broadcast(m);
        }
    }
    if (phase_ == 2) {
        ProcessorSet covered;
        for (const auto& [j, s] : recv2_)
            if (s.subset_of(live)) covered.insert(j);
        if (hooks_.coll->contains_good_set(covered)) {
            done_ = true;
            result_ = live;
            advanced = true;
            TraceEvent ev;
            ev.kind = TraceKind::CC_DONE;
            ev.actor = hooks_.self;
            ev.round = round_;
            ev.value = Value::id_set(result_);
            hooks_.trace(ev);
        }
    }
    return advanced;
}

} // namespace cuckoo
