#include "cuckoo/trace.hpp"

#include <json.hpp>

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cuckoo {

namespace {

const char* const kKindNames[] = {
    "SEND", "TAMPER", "DROP", "DELIVER", "INITIAL", "M1", "M2", "ACCEPT_RB",
    "RECRB_PUSH", "RESEND", "ACCEPT_RECRB", "ACCEPT_COSEND", "CC1", "CC2",
    "CC_DONE", "SM_INIT", "SM_STEP", "SM_OUTPUT", "ROUND_ADVANCE", "OUTPUT",
    "RECOVER", "QUIET", "WARN",
};

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    return out;
}

// Values are rendered with a one-letter type tag; field order is fixed so that
// identical runs serialize to identical bytes.
void append_value_json(std::string& out, const Value& v) {
    switch (v.kind()) {
        case Value::Kind::None:
            out += "null";
            break;
        case Value::Kind::Int:
            out += "{\"t\":\"i\",\"v\":" + std::to_string(v.as_int()) + "}";
            break;
        case Value::Kind::IdSet: {
            out += "{\"t\":\"s\",\"v\":[";
            bool first = true;
            for (int id : v.as_id_set().to_vector()) {
                if (!first) out += ",";
                out += std::to_string(id);
                first = false;
            }
            out += "]}";
            break;
        }
        case Value::Kind::Rational:
            out += "{\"t\":\"r\",\"n\":" + std::to_string(v.as_rational().num) +
                   ",\"e\":" + std::to_string(v.as_rational().exp) + "}";
            break;
        case Value::Kind::IntList: {
            out += "{\"t\":\"l\",\"v\":[";
            const auto& xs = v.as_int_list();
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i) out += ",";
                out += std::to_string(xs[i]);
            }
            out += "]}";
            break;
        }
    }
}

Value value_from_json(const nlohmann::json& j) {
    if (j.is_null()) return Value::none();
    const std::string t = j.at("t").get<std::string>();
    if (t == "i") return Value::integer(j.at("v").get<std::int64_t>());
    if (t == "s") {
        ProcessorSet s;
        for (const auto& id : j.at("v")) s.insert(id.get<int>());
        return Value::id_set(s);
    }
    if (t == "r") return Value::rational(Dyadic(j.at("n").get<std::int64_t>(), j.at("e").get<int>()));
    if (t == "l") return Value::int_list(j.at("v").get<std::vector<std::int64_t>>());
    throw std::runtime_error("unknown value tag in trace: " + t);
}

void append_int_array(std::string& out, const std::vector<int>& xs) {
    out += "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(xs[i]);
    }
    out += "]";
}

} // namespace

const char* trace_kind_name(TraceKind k) { return kKindNames[static_cast<int>(k)]; }

std::optional<TraceKind> trace_kind_from_name(const std::string& name) {
    for (int i = 0; i < static_cast<int>(std::size(kKindNames)); ++i)
        if (name == kKindNames[i]) return static_cast<TraceKind>(i);
    return std::nullopt;
}

BadSetCollection TraceHeader::collection() const {
    if (threshold >= 0) return BadSetCollection::threshold_collection(n, threshold);
    return BadSetCollection::from_maximal_sets(n, maximal_sets);
}

void Trace::write(std::ostream& os) const { os << to_string(); }

std::string Trace::to_string() const {
    std::string out;
    out.reserve(events.size() * 96 + 512);

    const auto& h = header;
    out += "{\"trace_version\":" + std::to_string(h.version);
    out += ",\"n\":" + std::to_string(h.n);
    out += ",\"t\":" + std::to_string(h.threshold);
    out += ",\"maximal_sets\":[";
    for (std::size_t i = 0; i < h.maximal_sets.size(); ++i) {
        if (i) out += ",";
        append_int_array(out, h.maximal_sets[i].to_vector());
    }
    out += "],\"controlled\":";
    append_int_array(out, h.controlled.to_vector());
    out += ",\"recovery_order\":";
    append_int_array(out, h.recovery_order);
    out += ",\"mode\":\"" + json_escape(h.mode) + "\"";
    out += ",\"protocol\":\"" + json_escape(h.protocol) + "\"";
    out += ",\"interval\":[" + std::to_string(h.interval_lo) + "," + std::to_string(h.interval_hi) + "]";
    out += ",\"inputs\":[";
    for (std::size_t i = 0; i < h.inputs.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(h.inputs[i]);
    }
    out += "],\"seed\":" + std::to_string(h.seed);
    out += ",\"max_events\":" + std::to_string(h.max_events);
    out += ",\"quiet_extension\":" + std::to_string(h.quiet_extension);
    out += ",\"completed\":";
    out += h.completed ? "true" : "false";
    out += ",\"stop_reason\":\"" + json_escape(h.stop_reason) + "\"}\n";

    for (const auto& e : events) {
        out += "{\"seq\":" + std::to_string(e.seq);
        out += ",\"time\":" + std::to_string(e.time);
        out += ",\"kind\":\"";
        out += trace_kind_name(e.kind);
        out += "\"";
        if (e.actor >= 0) out += ",\"actor\":" + std::to_string(e.actor);
        if (e.from >= 0) out += ",\"from\":" + std::to_string(e.from);
        if (e.to >= 0) out += ",\"to\":" + std::to_string(e.to);
        if (e.round >= 0) out += ",\"round\":" + std::to_string(e.round);
        if (e.sender >= 0) out += ",\"sender\":" + std::to_string(e.sender);
        if (e.iter >= 0) out += ",\"iter\":" + std::to_string(e.iter);
        if (e.rb_sender >= 0) out += ",\"rb_sender\":" + std::to_string(e.rb_sender);
        if (e.ref != 0) out += ",\"ref\":" + std::to_string(e.ref);
        if (e.digest != 0) out += ",\"digest\":" + std::to_string(e.digest);
        if (!e.value.is_none()) {
            out += ",\"value\":";
            append_value_json(out, e.value);
        }
        if (!e.note.empty()) out += ",\"note\":\"" + json_escape(e.note) + "\"";
        out += "}\n";
    }
    return out;
}

Trace Trace::read(std::istream& is) {
    Trace trace;
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("empty trace file");

    nlohmann::json h = nlohmann::json::parse(line);
    TraceHeader& hdr = trace.header;
    hdr.version = h.at("trace_version").get<int>();
    hdr.n = h.at("n").get<int>();
    hdr.threshold = h.at("t").get<int>();
    for (const auto& ms : h.at("maximal_sets")) {
        ProcessorSet s;
        for (const auto& id : ms) s.insert(id.get<int>());
        hdr.maximal_sets.push_back(s);
    }
    for (const auto& id : h.at("controlled")) hdr.controlled.insert(id.get<int>());
    hdr.recovery_order = h.at("recovery_order").get<std::vector<int>>();
    hdr.mode = h.at("mode").get<std::string>();
    hdr.protocol = h.at("protocol").get<std::string>();
    hdr.interval_lo = h.at("interval")[0].get<std::int64_t>();
    hdr.interval_hi = h.at("interval")[1].get<std::int64_t>();
    hdr.inputs = h.at("inputs").get<std::vector<std::int64_t>>();
    hdr.seed = h.at("seed").get<std::uint64_t>();
    hdr.max_events = h.at("max_events").get<std::uint64_t>();
    hdr.quiet_extension = h.at("quiet_extension").get<std::uint64_t>();
    hdr.completed = h.at("completed").get<bool>();
    hdr.stop_reason = h.at("stop_reason").get<std::string>();

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line);
        TraceEvent e;
        e.seq = j.at("seq").get<std::uint64_t>();
        e.time = j.at("time").get<std::uint64_t>();
        auto kind = trace_kind_from_name(j.at("kind").get<std::string>());
        if (!kind) throw std::runtime_error("unknown trace kind");
        e.kind = *kind;
        if (j.contains("actor")) e.actor = j["actor"].get<int>();
        if (j.contains("from")) e.from = j["from"].get<int>();
        if (j.contains("to")) e.to = j["to"].get<int>();
        if (j.contains("round")) e.round = j["round"].get<int>();
        if (j.contains("sender")) e.sender = j["sender"].get<int>();
        if (j.contains("iter")) e.iter = j["iter"].get<int>();
        if (j.contains("rb_sender")) e.rb_sender = j["rb_sender"].get<int>();
        if (j.contains("ref")) e.ref = j["ref"].get<std::uint64_t>();
        if (j.contains("digest")) e.digest = j["digest"].get<std::uint64_t>();
        if (j.contains("value")) e.value = value_from_json(j["value"]);
        if (j.contains("note")) e.note = j["note"].get<std::string>();
        trace.events.push_back(std::move(e));
    }
    return trace;
}

} // namespace cuckoo
