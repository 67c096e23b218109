#include "cuckoo/message.hpp"

namespace cuckoo {

const char* msg_type_name(MsgType t) {
    switch (t) {
        case MsgType::RbInitial: return "rb_initial";
        case MsgType::RbM1: return "rb_m1";
        case MsgType::RbM2: return "rb_m2";
        case MsgType::RecrbPush: return "recrb_push";
        case MsgType::Cc1: return "cc1";
        case MsgType::Cc2: return "cc2";
    }
    return "?";
}

std::uint64_t Message::digest() const {
    std::vector<std::uint8_t> buf;
    buf.push_back(static_cast<std::uint8_t>(type));
    auto put_i32 = [&buf](int v) {
        for (int i = 0; i < 4; ++i) buf.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    };
    put_i32(round);
    put_i32(sender);
    put_i32(iter);
    put_i32(rb_sender);
    value.serialize(buf);
    put_i32(static_cast<int>(h_prev.size()));
    for (const auto& e : h_prev) {
        put_i32(e.reporter);
        e.value.serialize(buf);
    }
    return fnv1a(buf);
}

std::string Message::context_string() const {
    std::string s = msg_type_name(type);
    s += " r=" + std::to_string(round) + " s=" + std::to_string(sender);
    if (type == MsgType::RbInitial || type == MsgType::RbM1 || type == MsgType::RbM2)
        s += " k=" + std::to_string(iter) + " q=" + std::to_string(rb_sender);
    if (type == MsgType::RecrbPush) s += " k=" + std::to_string(iter);
    return s;
}

} // namespace cuckoo
