#include "cuckoo/trace_harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "cuckoo/broadcast.hpp"
#include "cuckoo/example_protocols.hpp"

namespace cuckoo {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::PASS: return "PASS";
        case Verdict::FAIL: return "FAIL";
        case Verdict::VACUOUS: return "VACUOUS";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

struct AcceptInfo {
    std::uint64_t seq = 0;
    Value value;
};

// Everything the checkers need, built in one pass over the event list.
struct TraceIndex {
    int n = 0;
    bool completed = false;
    ProcessorSet controlled;
    std::map<int, std::uint64_t> recover_seq;

    std::map<RbKey, std::pair<std::uint64_t, Value>> rb_invokes; // INITIAL protocol events
    std::map<RbKey, std::map<int, AcceptInfo>> rb_accepts;
    std::map<RbKey, std::uint64_t> rb_initial_delivered; // first DELIVER from the true sender

    std::map<RecrbCtx, std::pair<std::uint64_t, Value>> recrb_invokes; // first push, iter==1
    std::map<RecrbCtx, std::map<int, AcceptInfo>> recrb_accepts;
    std::map<RecrbCtx, std::uint64_t> recrb_push_delivered;
    std::map<int, int> resends_by_actor;

    std::map<RecrbCtx, std::map<int, AcceptInfo>> cosend_accepts; // [(r,s)][processor]
    std::map<int, std::vector<std::pair<RecrbCtx, AcceptInfo>>> cosend_by_actor; // seq order

    std::map<int, std::map<int, ProcessorSet>> cc1;     // [round][actor] snapshot
    std::map<int, std::map<int, ProcessorSet>> cc_done; // [round][actor] result

    std::map<std::pair<int, int>, std::map<int, std::pair<std::uint64_t, std::uint64_t>>>
        sm_digests; // [(replica, round)][owner] -> (seq, digest)
    std::map<int, std::map<int, AcceptInfo>> sm_outputs; // [replica][owner]

    std::map<int, AcceptInfo> outputs; // global registry, by simulated processor

    std::map<std::uint64_t, const TraceEvent*> sends;   // by seq
    std::map<std::uint64_t, const TraceEvent*> tampers; // by ref
    std::map<std::uint64_t, const TraceEvent*> drops;   // by ref
    std::vector<const TraceEvent*> delivers;
    std::vector<const TraceEvent*> recovers;
    std::vector<const TraceEvent*> output_events;

    bool correct_at(int p, std::uint64_t seq) const {
        if (!controlled.contains(p)) return true;
        auto it = recover_seq.find(p);
        return it != recover_seq.end() && it->second < seq;
    }
};

TraceIndex build_index(const Trace& trace) {
    TraceIndex ix;
    ix.n = trace.header.n;
    ix.completed = trace.header.completed;
    ix.controlled = trace.header.controlled;

    for (const auto& e : trace.events) {
        switch (e.kind) {
            case TraceKind::RECOVER:
                ix.recover_seq.emplace(e.actor, e.seq);
                ix.recovers.push_back(&e);
                break;
            case TraceKind::INITIAL:
                ix.rb_invokes.emplace(RbKey{e.round, e.sender, e.iter, e.rb_sender},
                                      std::make_pair(e.seq, e.value));
                break;
            case TraceKind::ACCEPT_RB:
                ix.rb_accepts[RbKey{e.round, e.sender, e.iter, e.rb_sender}].emplace(
                    e.actor, AcceptInfo{e.seq, e.value});
                break;
            case TraceKind::RECRB_PUSH:
                if (e.iter == 1)
                    ix.recrb_invokes.emplace(RecrbCtx{e.round, e.sender},
                                             std::make_pair(e.seq, e.value));
                break;
            case TraceKind::RESEND:
                ix.resends_by_actor[e.actor] += 1;
                break;
            case TraceKind::ACCEPT_RECRB:
                ix.recrb_accepts[RecrbCtx{e.round, e.sender}].emplace(e.actor,
                                                                      AcceptInfo{e.seq, e.value});
                break;
            case TraceKind::ACCEPT_COSEND: {
                RecrbCtx ctx{e.round, e.sender};
                ix.cosend_accepts[ctx].emplace(e.actor, AcceptInfo{e.seq, e.value});
                ix.cosend_by_actor[e.actor].push_back({ctx, AcceptInfo{e.seq, e.value}});
                break;
            }
            case TraceKind::CC1:
                if (e.value.is_id_set()) ix.cc1[e.round].emplace(e.actor, e.value.as_id_set());
                break;
            case TraceKind::CC_DONE:
                if (e.value.is_id_set()) ix.cc_done[e.round].emplace(e.actor, e.value.as_id_set());
                break;
            case TraceKind::SM_INIT:
            case TraceKind::SM_STEP:
                ix.sm_digests[{e.sender, e.round}].emplace(e.actor,
                                                           std::make_pair(e.seq, e.digest));
                break;
            case TraceKind::SM_OUTPUT:
                ix.sm_outputs[e.sender].emplace(e.actor, AcceptInfo{e.seq, e.value});
                break;
            case TraceKind::OUTPUT:
                ix.outputs.emplace(e.actor, AcceptInfo{e.seq, e.value});
                ix.output_events.push_back(&e);
                break;
            case TraceKind::SEND:
                ix.sends.emplace(e.seq, &e);
                break;
            case TraceKind::TAMPER:
                ix.tampers.emplace(e.ref, &e);
                break;
            case TraceKind::DROP:
                ix.drops.emplace(e.ref, &e);
                break;
            case TraceKind::DELIVER: {
                ix.delivers.push_back(&e);
                if (e.note == msg_type_name(MsgType::RbInitial) && e.from == e.rb_sender) {
                    RbKey key{e.round, e.sender, e.iter, e.rb_sender};
                    if (!ix.rb_initial_delivered.count(key)) ix.rb_initial_delivered[key] = e.seq;
                }
                if (e.note == msg_type_name(MsgType::RecrbPush) && e.from == e.sender) {
                    RecrbCtx ctx{e.round, e.sender};
                    if (!ix.recrb_push_delivered.count(ctx)) ix.recrb_push_delivered[ctx] = e.seq;
                }
                break;
            }
            default:
                break;
        }
    }
    return ix;
}

std::string ctx_str(const RecrbCtx& c) {
    return "(r=" + std::to_string(c.round) + ",s=" + std::to_string(c.sender) + ")";
}

std::string key_str(const RbKey& k) {
    return "(r=" + std::to_string(k.round) + ",s=" + std::to_string(k.sender) +
           ",k=" + std::to_string(k.iter) + ",q=" + std::to_string(k.rb_sender) + ")";
}

// verdict assembly shared by the "for all instances, everyone accepts" checks;
// `pass_when_empty` marks pure safety properties that hold trivially over an
// empty instance domain, while the liveness-flavored ones stay VACUOUS there
struct Tally {
    bool any_eligible = false;
    bool any_incomplete = false;
    bool pass_when_empty = false;
    std::string fail;

    void eligible() { any_eligible = true; }
    void incomplete() { any_incomplete = true; }
    void failure(const std::string& w) {
        if (fail.empty()) fail = w;
    }
    PropertyReport report(const std::string& id) const {
        PropertyReport r;
        r.id = id;
        if (!fail.empty()) {
            r.verdict = Verdict::FAIL;
            r.witness = fail;
        } else if (!any_eligible && !pass_when_empty) {
            r.verdict = Verdict::VACUOUS;
            r.witness = "no qualifying instance";
        } else if (any_incomplete) {
            r.verdict = Verdict::VACUOUS;
            r.witness = "run not quiet-completed";
        } else {
            r.verdict = Verdict::PASS;
        }
        return r;
    }
};

} // namespace

std::vector<PropertyReport> check_broadcast_properties(const Trace& trace,
                                                       const BadSetCollection& /*coll*/) {
    TraceIndex ix = build_index(trace);
    std::vector<PropertyReport> out;

    // RB1: a sender correct at invocation gets its value accepted everywhere
    {
        Tally t;
        for (const auto& [key, inv] : ix.rb_invokes) {
            if (!ix.correct_at(key.rb_sender, inv.first)) continue;
            t.eligible();
            auto accepts = ix.rb_accepts.find(key);
            for (int p = 0; p < ix.n; ++p) {
                const AcceptInfo* got = nullptr;
                if (accepts != ix.rb_accepts.end()) {
                    auto pit = accepts->second.find(p);
                    if (pit != accepts->second.end()) got = &pit->second;
                }
                if (!got) {
                    if (ix.completed)
                        t.failure("RB " + key_str(key) + " never accepted at processor " +
                                  std::to_string(p));
                    else
                        t.incomplete();
                } else if (!(got->value == inv.second)) {
                    t.failure("RB " + key_str(key) + " accepted wrong value at seq " +
                              std::to_string(got->seq));
                }
            }
        }
        out.push_back(t.report("RB1"));
    }

    // RB2: single accepted value per instance; accepted anywhere means accepted
    // everywhere once the run is quiet-complete
    {
        Tally t;
        if (!ix.rb_invokes.empty() || !ix.rb_accepts.empty()) t.eligible();
        for (const auto& [key, accepts] : ix.rb_accepts) {
            if (accepts.empty()) continue;
            const AcceptInfo& first = accepts.begin()->second;
            for (const auto& [p, info] : accepts)
                if (!(info.value == first.value))
                    t.failure("RB " + key_str(key) + " accepted two values, seqs " +
                              std::to_string(first.seq) + "," + std::to_string(info.seq));
            if (static_cast<int>(accepts.size()) < ix.n) {
                if (ix.completed)
                    t.failure("RB " + key_str(key) + " accepted by " +
                              std::to_string(accepts.size()) + "/" + std::to_string(ix.n) +
                              " processors by quiet end");
                else
                    t.incomplete();
            }
        }
        out.push_back(t.report("RB2"));
    }

    // RB3: no acceptance without the sender's initial having been delivered
    {
        PropertyReport r;
        r.id = "RB3";
        r.verdict = Verdict::PASS;
        for (const auto& [key, accepts] : ix.rb_accepts) {
            if (accepts.empty()) continue;
            std::uint64_t first_accept = accepts.begin()->second.seq;
            for (const auto& [p, info] : accepts) first_accept = std::min(first_accept, info.seq);
            auto dit = ix.rb_initial_delivered.find(key);
            if (dit == ix.rb_initial_delivered.end() || dit->second > first_accept) {
                r.verdict = Verdict::FAIL;
                r.witness = "RB " + key_str(key) + " accepted at seq " +
                            std::to_string(first_accept) + " with no prior initial from sender";
                break;
            }
        }
        out.push_back(r);
    }

    // RRB1
    {
        Tally t;
        for (const auto& [ctx, inv] : ix.recrb_invokes) {
            if (!ix.correct_at(ctx.sender, inv.first)) continue;
            t.eligible();
            auto accepts = ix.recrb_accepts.find(ctx);
            for (int p = 0; p < ix.n; ++p) {
                const AcceptInfo* got = nullptr;
                if (accepts != ix.recrb_accepts.end()) {
                    auto pit = accepts->second.find(p);
                    if (pit != accepts->second.end()) got = &pit->second;
                }
                if (!got) {
                    if (ix.completed)
                        t.failure("RecRB " + ctx_str(ctx) + " never accepted at processor " +
                                  std::to_string(p));
                    else
                        t.incomplete();
                } else if (!(got->value == inv.second)) {
                    t.failure("RecRB " + ctx_str(ctx) + " accepted value != sent value at seq " +
                              std::to_string(got->seq));
                }
            }
        }
        out.push_back(t.report("RRB1"));
    }

    // RRB2
    {
        Tally t;
        if (!ix.recrb_invokes.empty() || !ix.recrb_accepts.empty()) t.eligible();
        for (const auto& [ctx, accepts] : ix.recrb_accepts) {
            if (accepts.empty()) continue;
            const AcceptInfo& first = accepts.begin()->second;
            for (const auto& [p, info] : accepts)
                if (!(info.value == first.value))
                    t.failure("RecRB " + ctx_str(ctx) + " accepted two values, seqs " +
                              std::to_string(first.seq) + "," + std::to_string(info.seq));
            if (static_cast<int>(accepts.size()) < ix.n) {
                if (ix.completed)
                    t.failure("RecRB " + ctx_str(ctx) + " accepted by " +
                              std::to_string(accepts.size()) + "/" + std::to_string(ix.n) +
                              " by quiet end");
                else
                    t.incomplete();
            }
        }
        out.push_back(t.report("RRB2"));
    }

    // RRB3
    {
        PropertyReport r;
        r.id = "RRB3";
        r.verdict = Verdict::PASS;
        for (const auto& [ctx, accepts] : ix.recrb_accepts) {
            if (accepts.empty()) continue;
            std::uint64_t first_accept = accepts.begin()->second.seq;
            for (const auto& [p, info] : accepts) first_accept = std::min(first_accept, info.seq);
            auto dit = ix.recrb_push_delivered.find(ctx);
            if (dit == ix.recrb_push_delivered.end() || dit->second > first_accept) {
                r.verdict = Verdict::FAIL;
                r.witness = "RecRB " + ctx_str(ctx) + " accepted at seq " +
                            std::to_string(first_accept) + " with no push from its sender";
                break;
            }
        }
        out.push_back(r);
    }

    // RRB4: invoked under control, later recovered -> everyone accepts
    {
        Tally t;
        t.pass_when_empty = true; // no recovered sender means nothing to violate
        for (const auto& [ctx, inv] : ix.recrb_invokes) {
            if (ix.correct_at(ctx.sender, inv.first)) continue; // controlled at invoke
            auto rit = ix.recover_seq.find(ctx.sender);
            if (rit == ix.recover_seq.end() || rit->second < inv.first) continue;
            t.eligible();
            auto accepts = ix.recrb_accepts.find(ctx);
            int got = accepts == ix.recrb_accepts.end() ? 0 : static_cast<int>(accepts->second.size());
            if (got < ix.n) {
                if (ix.completed)
                    t.failure("RecRB " + ctx_str(ctx) + " sender recovered at seq " +
                              std::to_string(rit->second) + " but only " + std::to_string(got) +
                              "/" + std::to_string(ix.n) + " accepted");
                else
                    t.incomplete();
            }
        }
        out.push_back(t.report("RRB4"));
    }

    // CO1: for never-controlled senders, every processor accepts the
    // round-ordered prefix of what was broadcast
    {
        Tally t;
        std::map<int, std::map<int, Value>> sent; // sender -> round -> value
        for (const auto& [ctx, inv] : ix.recrb_invokes)
            if (!ix.controlled.contains(ctx.sender)) sent[ctx.sender][ctx.round] = inv.second;
        for (const auto& [s, rounds] : sent) {
            t.eligible();
            int max_round = rounds.rbegin()->first;
            for (int p = 0; p < ix.n; ++p) {
                std::vector<std::pair<std::uint64_t, std::pair<int, Value>>> got;
                auto ait = ix.cosend_by_actor.find(p);
                if (ait != ix.cosend_by_actor.end())
                    for (const auto& [ctx, info] : ait->second)
                        if (ctx.sender == s) got.push_back({info.seq, {ctx.round, info.value}});
                std::sort(got.begin(), got.end());
                for (std::size_t i = 0; i < got.size(); ++i) {
                    int r = got[i].second.first;
                    if (r != static_cast<int>(i) + 1) {
                        t.failure("processor " + std::to_string(p) + " accepted sender " +
                                  std::to_string(s) + " round " + std::to_string(r) +
                                  " out of order at seq " + std::to_string(got[i].first));
                        break;
                    }
                    auto vit = rounds.find(r);
                    if (vit == rounds.end() || !(vit->second == got[i].second.second)) {
                        t.failure("processor " + std::to_string(p) + " accepted sender " +
                                  std::to_string(s) + " round " + std::to_string(r) +
                                  " with a value never broadcast, seq " +
                                  std::to_string(got[i].first));
                        break;
                    }
                }
                if (static_cast<int>(got.size()) < max_round) {
                    if (ix.completed)
                        t.failure("processor " + std::to_string(p) + " accepted only " +
                                  std::to_string(got.size()) + "/" + std::to_string(max_round) +
                                  " rounds of sender " + std::to_string(s));
                    else
                        t.incomplete();
                }
            }
        }
        out.push_back(t.report("CO1"));
    }

    // CO2: accepted id sets name the sender and only causally delivered rounds
    {
        PropertyReport r;
        r.id = "CO2";
        r.verdict = Verdict::VACUOUS;
        r.witness = "no round>1 acceptance";
        bool any = false;
        for (const auto& [p, accepts] : ix.cosend_by_actor) {
            std::set<std::pair<int, int>> before; // (round, sender) accepted so far
            std::vector<std::pair<std::uint64_t, std::pair<RecrbCtx, Value>>> ordered;
            for (const auto& [ctx, info] : accepts) ordered.push_back({info.seq, {ctx, info.value}});
            std::sort(ordered.begin(), ordered.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            for (const auto& [seq, cv] : ordered) {
                const RecrbCtx& ctx = cv.first;
                const Value& v = cv.second;
                if (ctx.round > 1) {
                    any = true;
                    if (!v.is_id_set() || !v.as_id_set().contains(ctx.sender)) {
                        r.verdict = Verdict::FAIL;
                        r.witness = "accept " + ctx_str(ctx) + " at seq " + std::to_string(seq) +
                                    " does not name its sender";
                        break;
                    }
                    for (int q : v.as_id_set().to_vector()) {
                        if (!before.count({ctx.round - 1, q})) {
                            r.verdict = Verdict::FAIL;
                            r.witness = "accept " + ctx_str(ctx) + " at seq " +
                                        std::to_string(seq) + " before accepting (r=" +
                                        std::to_string(ctx.round - 1) + ",s=" + std::to_string(q) +
                                        ") at processor " + std::to_string(p);
                            break;
                        }
                    }
                    if (r.verdict == Verdict::FAIL) break;
                }
                before.insert({ctx.round, ctx.sender});
            }
            if (r.verdict == Verdict::FAIL) break;
        }
        if (r.verdict != Verdict::FAIL && any) {
            r.verdict = Verdict::PASS;
            r.witness.clear();
        }
        out.push_back(r);
    }

    // CO3: per context, one value, and all processors once quiet-complete
    {
        Tally t;
        if (!ix.cosend_accepts.empty()) t.eligible();
        for (const auto& [ctx, accepts] : ix.cosend_accepts) {
            const AcceptInfo& first = accepts.begin()->second;
            for (const auto& [p, info] : accepts)
                if (!(info.value == first.value))
                    t.failure("co_send " + ctx_str(ctx) + " accepted two values, seqs " +
                              std::to_string(first.seq) + "," + std::to_string(info.seq));
            if (static_cast<int>(accepts.size()) < ix.n) {
                if (ix.completed)
                    t.failure("co_send " + ctx_str(ctx) + " accepted by " +
                              std::to_string(accepts.size()) + "/" + std::to_string(ix.n) +
                              " by quiet end");
                else
                    t.incomplete();
            }
        }
        out.push_back(t.report("CO3"));
    }

    return out;
}

std::vector<PropertyReport> check_common_core(const Trace& trace, const BadSetCollection& coll) {
    TraceIndex ix = build_index(trace);
    std::vector<PropertyReport> out;

    // Validity: every result contains the snapshot it started from
    {
        PropertyReport r;
        r.id = "CC_VALIDITY";
        r.verdict = ix.cc_done.empty() ? Verdict::VACUOUS : Verdict::PASS;
        if (ix.cc_done.empty()) r.witness = "no completed common-core round";
        for (const auto& [round, dones] : ix.cc_done) {
            for (const auto& [actor, result] : dones) {
                auto c1 = ix.cc1.find(round);
                const ProcessorSet* snap = nullptr;
                if (c1 != ix.cc1.end()) {
                    auto ait = c1->second.find(actor);
                    if (ait != c1->second.end()) snap = &ait->second;
                }
                if (!snap || !snap->subset_of(result)) {
                    r.verdict = Verdict::FAIL;
                    r.witness = "round " + std::to_string(round) + " processor " +
                                std::to_string(actor) + " result drops its own snapshot";
                }
            }
        }
        out.push_back(r);
    }

    // Commonality: the intersection of all results of a round contains a good set
    {
        PropertyReport r;
        r.id = "CC_COMMONALITY";
        r.verdict = ix.cc_done.empty() ? Verdict::VACUOUS : Verdict::PASS;
        if (ix.cc_done.empty()) r.witness = "no completed common-core round";
        for (const auto& [round, dones] : ix.cc_done) {
            ProcessorSet inter = ProcessorSet::full(ix.n);
            for (const auto& [actor, result] : dones) inter = inter.intersected(result);
            if (!coll.contains_good_set(inter)) {
                r.verdict = Verdict::FAIL;
                r.witness = "round " + std::to_string(round) + " intersection " +
                            inter.to_string() + " lacks a good set";
            }
        }
        out.push_back(r);
    }

    // Termination: every never-controlled processor that could start a round
    // finishes it (quiet-complete runs only)
    {
        PropertyReport r;
        r.id = "CC_TERMINATION";
        r.verdict = Verdict::VACUOUS;
        r.witness = ix.cc1.empty() ? "no common-core round" : "run not quiet-completed";
        if (!ix.cc1.empty() && ix.completed) {
            r.verdict = Verdict::PASS;
            r.witness.clear();
            for (const auto& [round, starters] : ix.cc1) {
                bool correct_started = false;
                for (const auto& [actor, snap] : starters)
                    if (!ix.controlled.contains(actor)) correct_started = true;
                if (!correct_started) continue;
                for (int p = 0; p < ix.n; ++p) {
                    if (ix.controlled.contains(p)) continue;
                    auto dit = ix.cc_done.find(round);
                    if (dit == ix.cc_done.end() || !dit->second.count(p)) {
                        r.verdict = Verdict::FAIL;
                        r.witness = "round " + std::to_string(round) + " processor " +
                                    std::to_string(p) + " never completed";
                    }
                }
            }
        }
        out.push_back(r);
    }

    return out;
}

std::vector<PropertyReport> check_network_properties(const Trace& trace,
                                                     const BadSetCollection& coll) {
    TraceIndex ix = build_index(trace);
    std::vector<PropertyReport> out;

    // No forgery: every delivery traces back to a send by the same processor,
    // with the payload it carried after any recorded tamper
    {
        PropertyReport r;
        r.id = "NET_NO_FORGERY";
        r.verdict = ix.delivers.empty() ? Verdict::VACUOUS : Verdict::PASS;
        for (const auto* d : ix.delivers) {
            auto sit = ix.sends.find(d->ref);
            if (sit == ix.sends.end() || sit->second->from != d->from ||
                sit->second->to != d->to) {
                r.verdict = Verdict::FAIL;
                r.witness = "deliver seq " + std::to_string(d->seq) + " has no matching send";
                break;
            }
            auto tit = ix.tampers.find(d->ref);
            std::uint64_t expect =
                tit != ix.tampers.end() ? tit->second->digest : sit->second->digest;
            if (d->digest != expect) {
                r.verdict = Verdict::FAIL;
                r.witness = "deliver seq " + std::to_string(d->seq) + " payload digest mismatch";
                break;
            }
        }
        out.push_back(r);
    }

    // Monotone recovery: no tamper/drop by a recovered sender
    {
        PropertyReport r;
        r.id = "NET_MONOTONE_RECOVERY";
        r.verdict = Verdict::PASS;
        TraceIndex& x = ix;
        for (const auto& e : trace.events) {
            if (e.kind != TraceKind::TAMPER && e.kind != TraceKind::DROP) continue;
            auto rit = x.recover_seq.find(e.from);
            if (rit != x.recover_seq.end() && rit->second < e.seq) {
                r.verdict = Verdict::FAIL;
                r.witness = "seq " + std::to_string(e.seq) + " tampers a recovered sender";
                break;
            }
        }
        out.push_back(r);
    }

    // Recovery trigger: a release only after the registry covers a good set
    {
        PropertyReport r;
        r.id = "NET_RECOVERY_TRIGGER";
        r.verdict = Verdict::PASS; // trivially true when nothing recovered
        ProcessorSet seen;
        for (const auto& e : trace.events) {
            if (e.kind == TraceKind::OUTPUT) seen.insert(e.actor);
            if (e.kind == TraceKind::RECOVER && !coll.contains_good_set(seen)) {
                r.verdict = Verdict::FAIL;
                r.witness = "recover at seq " + std::to_string(e.seq) +
                            " with outputs " + seen.to_string();
                break;
            }
        }
        out.push_back(r);
    }

    // Finite delay: in a drained run, everything sent and not dropped arrived
    {
        PropertyReport r;
        r.id = "NET_FINITE_DELAY";
        if (!ix.completed) {
            r.verdict = Verdict::VACUOUS;
            r.witness = "run not quiet-completed";
        } else {
            r.verdict = Verdict::PASS;
            std::set<std::uint64_t> delivered;
            for (const auto* d : ix.delivers) delivered.insert(d->ref);
            for (const auto& [seq, send] : ix.sends) {
                if (ix.drops.count(seq) || delivered.count(seq)) continue;
                r.verdict = Verdict::FAIL;
                r.witness = "send seq " + std::to_string(seq) + " never delivered";
                break;
            }
        }
        out.push_back(r);
    }

    return out;
}

std::vector<PropertyReport> check_replica_agreement(const Trace& trace) {
    TraceIndex ix = build_index(trace);
    std::vector<PropertyReport> out;
    PropertyReport r;
    r.id = "REPLICA_AGREEMENT";
    if (ix.sm_digests.empty()) {
        r.verdict = Verdict::VACUOUS;
        r.witness = "no replica steps in trace";
        out.push_back(r);
        return out;
    }
    r.verdict = Verdict::PASS;
    for (const auto& [key, owners] : ix.sm_digests) {
        const auto& first = *owners.begin();
        for (const auto& [owner, sd] : owners) {
            if (sd.second != first.second.second) {
                r.verdict = Verdict::FAIL;
                r.witness = "replica " + std::to_string(key.first) + " round " +
                            std::to_string(key.second) + " diverges between owners " +
                            std::to_string(first.first) + " and " + std::to_string(owner) +
                            " (seqs " + std::to_string(first.second.first) + "," +
                            std::to_string(sd.first) + ")";
                break;
            }
        }
        if (r.verdict == Verdict::FAIL) break;
    }
    if (r.verdict == Verdict::PASS) {
        for (const auto& [replica, owners] : ix.sm_outputs) {
            const auto& first = *owners.begin();
            for (const auto& [owner, info] : owners) {
                if (!(info.value == first.second.value)) {
                    r.verdict = Verdict::FAIL;
                    r.witness = "replica " + std::to_string(replica) +
                                " output diverges between owners, seqs " +
                                std::to_string(first.second.seq) + "," + std::to_string(info.seq);
                    break;
                }
            }
            if (r.verdict == Verdict::FAIL) break;
        }
    }
    out.push_back(r);
    return out;
}

namespace {

std::unique_ptr<SyncProtocol> protocol_from_header(const TraceHeader& h) {
    if (h.protocol == "epsilon-agreement")
        return make_epsilon_agreement(EpsilonAgreementConfig{h.interval_lo, h.interval_hi}, h.n);
    if (h.protocol == "flood") return make_flood(h.n);
    return nullptr;
}

bool replay_matches(const SyncProtocol& protocol, const TraceIndex& ix, int n, int t,
                    const std::map<int, Value>& inputs,
                    const std::map<int, std::map<int, ProcessorSet>>& schedule) {
    BenignRun run;
    run.inputs = inputs;
    run.schedule = schedule;
    BenignOutcome got;
    try {
        got = benign_oracle_run(protocol, run, n, t);
    } catch (const std::exception&) {
        return false;
    }
    for (int p = 0; p < n; ++p) {
        auto oit = ix.outputs.find(p);
        auto git = got.outputs.find(p);
        if (oit == ix.outputs.end() || git == got.outputs.end()) return false;
        if (!(oit->second.value == git->second)) return false;
    }
    return true;
}

} // namespace

PropertyReport check_cuckoo_equivalence(const Trace& trace, const BadSetCollection& coll,
                                        const CheckOptions& opts) {
    TraceIndex ix = build_index(trace);
    PropertyReport r;
    r.id = "CUCKOO";

    auto protocol = protocol_from_header(trace.header);
    if (!protocol) {
        r.verdict = Verdict::VACUOUS;
        r.witness = "no simulated protocol in trace";
        return r;
    }
    const int n = trace.header.n;
    if (static_cast<int>(ix.outputs.size()) < n) {
        r.verdict = Verdict::VACUOUS;
        r.witness = "only " + std::to_string(ix.outputs.size()) + "/" + std::to_string(n) +
                    " processors output";
        return r;
    }

    // the values everyone's replicas actually started from
    std::map<int, Value> accepted1;
    for (int i = 0; i < n; ++i) {
        auto it = ix.cosend_accepts.find(RecrbCtx{1, i});
        if (it == ix.cosend_accepts.end() || it->second.empty()) {
            r.verdict = Verdict::VACUOUS;
            r.witness = "round-1 broadcast of processor " + std::to_string(i) + " never accepted";
            return r;
        }
        accepted1[i] = it->second.begin()->second.value;
    }

    ProcessorSet replaced;
    std::string witness = "replacements:";
    for (int i = 0; i < n; ++i) {
        Value true_input = Value::integer(trace.header.inputs.size() > static_cast<std::size_t>(i)
                                              ? trace.header.inputs[i]
                                              : 0);
        if (!(accepted1[i] == true_input)) {
            replaced.insert(i);
            witness += " p" + std::to_string(i) + ":" + true_input.brief() + "->" +
                       accepted1[i].brief();
        }
    }
    if (replaced.empty()) witness += " none";

    if (!coll.is_bad(replaced)) {
        r.verdict = Verdict::FAIL;
        r.witness = "replaced inputs " + replaced.to_string() + " do not fit any bad set";
        return r;
    }

    // epsilon shortcut: adjacency plus hull containment of the accepted inputs
    if (protocol->name() == "epsilon-agreement" && !opts.force_replay) {
        std::int64_t lo = 0, hi = 0;
        bool have = false;
        for (const auto& [i, v] : accepted1) {
            if (!v.is_int()) { have = false; break; }
            if (!have || v.as_int() < lo) lo = v.as_int();
            if (!have || v.as_int() > hi) hi = v.as_int();
            have = true;
        }
        if (have) {
            bool ok = true;
            std::int64_t omin = 0, omax = 0;
            bool first = true;
            for (const auto& [p, info] : ix.outputs) {
                if (!info.value.is_int()) { ok = false; break; }
                std::int64_t o = info.value.as_int();
                if (first || o < omin) omin = o;
                if (first || o > omax) omax = o;
                first = false;
            }
            if (ok && omax - omin <= 1 && omin >= lo && omax <= hi) {
                r.verdict = Verdict::PASS;
                r.witness = witness + " (adjacency shortcut)";
                return r;
            }
        }
    }

    // replay through the independent benign executor on the trace's own
    // accepted per-round sets
    const int R = protocol->rounds();
    int thr = trace.header.threshold;
    if (thr < 0) { // explicit collection: largest maximal set plays the role of t
        thr = 0;
        for (const auto& m : coll.maximal_sets()) thr = std::max(thr, m.size());
    }
    std::map<int, std::map<int, ProcessorSet>> schedule;
    bool schedule_ok = true;
    for (int round = 1; round < R && schedule_ok; ++round) {
        for (int i = 0; i < n; ++i) {
            auto it = ix.cosend_accepts.find(RecrbCtx{round + 1, i});
            if (it == ix.cosend_accepts.end() || it->second.empty() ||
                !it->second.begin()->second.value.is_id_set()) {
                schedule_ok = false;
                break;
            }
            schedule[round][i] = it->second.begin()->second.value.as_id_set();
        }
    }
    if (schedule_ok && replay_matches(*protocol, ix, n, thr, accepted1, schedule)) {
        r.verdict = Verdict::PASS;
        r.witness = witness + " (replay)";
        return r;
    }

    // candidate schedules: the trace's own accepted sets always; the full
    // core-schedule family only behind the flag and only at desk scale
    std::vector<std::map<int, std::map<int, ProcessorSet>>> schedules;
    if (schedule_ok) schedules.push_back(schedule);
    if (opts.full_schedule_search && n <= 4 && R <= 4) {
        for_each_core_schedule(n, thr, R - 1, [&](const auto& s) {
            if (schedules.size() < 4096) schedules.push_back(s);
        });
    }

    // bounded fallback: search replacement assignments from the candidate domain
    if (!opts.candidate_domain.empty() && !schedules.empty()) {
        std::uint64_t tried = 0;
        for (const auto& sched : schedules) {
            for (const auto& bad : coll.maximal_sets()) {
                std::vector<int> members = bad.to_vector();
                std::vector<std::size_t> idx(members.size(), 0);
                const std::size_t base = opts.candidate_domain.size() + 1; // +1 = keep original
                while (true) {
                    if (++tried > opts.search_cap) {
                        r.verdict = Verdict::INCONCLUSIVE;
                        r.witness = "search cap " + std::to_string(opts.search_cap) +
                                    " exhausted over domain size " +
                                    std::to_string(opts.candidate_domain.size()) + " and " +
                                    std::to_string(schedules.size()) + " schedules";
                        return r;
                    }
                    std::map<int, Value> candidate;
                    for (int i = 0; i < n; ++i)
                        candidate[i] = Value::integer(
                            trace.header.inputs.size() > static_cast<std::size_t>(i)
                                ? trace.header.inputs[i]
                                : 0);
                    std::string cw = "replacements:";
                    for (std::size_t m = 0; m < members.size(); ++m) {
                        if (idx[m] > 0) {
                            candidate[members[m]] =
                                Value::integer(opts.candidate_domain[idx[m] - 1]);
                            cw += " p" + std::to_string(members[m]) + "->" +
                                  std::to_string(opts.candidate_domain[idx[m] - 1]);
                        }
                    }
                    if (replay_matches(*protocol, ix, n, thr, candidate, sched)) {
                        r.verdict = Verdict::PASS;
                        r.witness = cw + " (search)";
                        return r;
                    }
                    std::size_t d = 0;
                    while (d < idx.size() && ++idx[d] == base) idx[d++] = 0;
                    if (d == idx.size()) break;
                }
            }
        }
    }

    r.verdict = Verdict::FAIL;
    r.witness = "no benign run over schedule + replacements reproduces the outputs; " + witness;
    return r;
}

std::vector<PropertyReport> run_all_checks(const Trace& trace, const CheckOptions& opts) {
    BadSetCollection coll = trace.header.collection();
    std::vector<PropertyReport> all;
    auto add = [&all](std::vector<PropertyReport> v) {
        for (auto& r : v) all.push_back(std::move(r));
    };
    add(check_broadcast_properties(trace, coll));
    add(check_common_core(trace, coll));
    add(check_network_properties(trace, coll));
    add(check_replica_agreement(trace));
    all.push_back(check_cuckoo_equivalence(trace, coll, opts));

    if (!opts.only.empty()) {
        std::vector<PropertyReport> filtered;
        for (auto& r : all)
            if (std::find(opts.only.begin(), opts.only.end(), r.id) != opts.only.end())
                filtered.push_back(std::move(r));
        return filtered;
    }
    return all;
}

bool all_pass(const std::vector<PropertyReport>& reports) {
    for (const auto& r : reports)
        if (r.verdict == Verdict::FAIL || r.verdict == Verdict::INCONCLUSIVE) return false;
    return true;
}

std::string render_report(const std::vector<PropertyReport>& reports) {
    std::ostringstream os;
    for (const auto& r : reports) {
        os << r.id;
        for (std::size_t i = r.id.size(); i < 22; ++i) os << ' ';
        os << verdict_name(r.verdict);
        if (!r.witness.empty()) os << "  " << r.witness;
        os << "\n";
    }
    return os.str();
}

std::string report_to_json(const std::vector<PropertyReport>& reports) {
    std::string out = "[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i) out += ",";
        out += "\n  {\"id\":\"" + reports[i].id + "\",\"verdict\":\"" +
               verdict_name(reports[i].verdict) + "\",\"witness\":\"";
        for (char c : reports[i].witness) {
            if (c == '"') out += "\\\"";
            else if (c == '\\') out += "\\\\";
            else out += c;
        }
        out += "\"}";
    }
    out += "\n]\n";
    return out;
}

} // namespace cuckoo
