#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cuckoo/adversary_structure.hpp"
#include "cuckoo/value.hpp"

namespace cuckoo {

enum class TraceKind : std::uint8_t {
    SEND,
    TAMPER,
    DROP,
    DELIVER,
    INITIAL,
    M1,
    M2,
    ACCEPT_RB,
    RECRB_PUSH,
    RESEND,
    ACCEPT_RECRB,
    ACCEPT_COSEND,
    CC1,
    CC2,
    CC_DONE,
    SM_INIT,
    SM_STEP,
    SM_OUTPUT,
    ROUND_ADVANCE,
    OUTPUT,
    RECOVER,
    QUIET,
    WARN,
};

const char* trace_kind_name(TraceKind k);
std::optional<TraceKind> trace_kind_from_name(const std::string& name);

// One record in the append-only run log. Context fields default to -1 when not
// applicable; `ref` points at the SEND event an envelope-level record refers to.
struct TraceEvent {
    std::uint64_t seq = 0;
    std::uint64_t time = 0;
    TraceKind kind = TraceKind::WARN;
    int actor = -1;
    int from = -1;
    int to = -1;
    int round = -1;
    int sender = -1;
    int iter = -1;
    int rb_sender = -1;
    std::uint64_t ref = 0;
    std::uint64_t digest = 0;
    Value value;
    std::string note;
};

struct TraceHeader {
    int version = 1;
    int n = 0;
    int threshold = -1;                       // -1 for explicit collections
    std::vector<ProcessorSet> maximal_sets;   // the declared fault structure
    ProcessorSet controlled;
    std::vector<int> recovery_order;
    std::string mode;                         // "bisynch" | "bimo" | suite label
    std::string protocol;                     // "epsilon-agreement" | "flood" | ""
    std::int64_t interval_lo = 0;
    std::int64_t interval_hi = 0;
    std::vector<std::int64_t> inputs;
    std::uint64_t seed = 0;
    std::uint64_t max_events = 0;
    std::uint64_t quiet_extension = 0;
    bool completed = false; // queue fully drained inside the quiet extension
    std::string stop_reason;

    BadSetCollection collection() const;
};

struct Trace {
    TraceHeader header;
    std::vector<TraceEvent> events;

    void write(std::ostream& os) const;
    static Trace read(std::istream& is);

    std::string to_string() const;
};

} // namespace cuckoo
