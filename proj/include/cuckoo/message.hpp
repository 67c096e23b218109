#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cuckoo/value.hpp"

namespace cuckoo {

enum class MsgType : std::uint8_t {
    RbInitial = 0, // RB sender's first value, per (round, sender, iter, rb_sender)
    RbM1 = 1,      // first-wave echo
    RbM2 = 2,      // second-wave confirmation
    RecrbPush = 3, // RecRB sender's iteration message <v, k, H[k-1]>
    Cc1 = 4,       // common-core first exchange
    Cc2 = 5,       // common-core second exchange
};

const char* msg_type_name(MsgType t);

struct HEntry {
    int reporter = -1;
    Value value;

    friend bool operator==(const HEntry& a, const HEntry& b) {
        return a.reporter == b.reporter && a.value == b.value;
    }
};

// Wire payload. Identity of the wire sender is carried by the envelope, never
// by the payload: receivers bind "from s" / "from q" checks to the envelope's
// from field, which the adversary cannot change. Everything here is content
// the adversary may rewrite on messages from processors it controls.
struct Message {
    MsgType type = MsgType::RbInitial;
    int round = 0;     // broadcast context round r (also the common-core round)
    int sender = 0;    // broadcast context sender s (unused for Cc*)
    int iter = 0;      // RecRB iteration k
    int rb_sender = 0; // RB instance owner q (Rb* only)
    Value value;
    std::vector<HEntry> h_prev; // RecrbPush only: sender's H[k-1]

    std::uint64_t digest() const;
    std::string context_string() const;
};

} // namespace cuckoo
