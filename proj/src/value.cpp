#include "cuckoo/value.hpp"

namespace cuckoo {

namespace {

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

} // namespace

void Value::serialize(std::vector<std::uint8_t>& out) const {
    out.push_back(static_cast<std::uint8_t>(kind_));
    switch (kind_) {
        case Kind::None:
            break;
        case Kind::Int:
            put_u64(out, static_cast<std::uint64_t>(int_));
            break;
        case Kind::IdSet:
            put_u64(out, ids_.bits());
            break;
        case Kind::Rational:
            put_u64(out, static_cast<std::uint64_t>(rat_.num));
            put_u64(out, static_cast<std::uint64_t>(rat_.exp));
            break;
        case Kind::IntList:
            put_u64(out, list_.size());
            for (auto v : list_) put_u64(out, static_cast<std::uint64_t>(v));
            break;
    }
}

std::string Value::brief() const {
    switch (kind_) {
        case Kind::None:
            return "-";
        case Kind::Int:
            return "int:" + std::to_string(int_);
        case Kind::IdSet:
            return "ids:" + ids_.to_string();
        case Kind::Rational:
            return "rat:" + rat_.to_string();
        case Kind::IntList: {
            std::string s = "list:[";
            for (std::size_t i = 0; i < list_.size(); ++i) {
                if (i) s += ",";
                s += std::to_string(list_[i]);
            }
            return s + "]";
        }
    }
    return "?";
}

bool operator==(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_) return false;
    switch (a.kind_) {
        case Value::Kind::None:
            return true;
        case Value::Kind::Int:
            return a.int_ == b.int_;
        case Value::Kind::IdSet:
            return a.ids_ == b.ids_;
        case Value::Kind::Rational:
            return a.rat_ == b.rat_;
        case Value::Kind::IntList:
            return a.list_ == b.list_;
    }
    return false;
}

bool operator<(const Value& a, const Value& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    switch (a.kind_) {
        case Value::Kind::None:
            return false;
        case Value::Kind::Int:
            return a.int_ < b.int_;
        case Value::Kind::IdSet:
            return a.ids_ < b.ids_;
        case Value::Kind::Rational: {
            if (a.rat_ == b.rat_) return false;
            return a.rat_ < b.rat_;
        }
        case Value::Kind::IntList:
            return a.list_ < b.list_;
    }
    return false;
}

std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (auto b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t digest_of(const Value& v) {
    std::vector<std::uint8_t> buf;
    v.serialize(buf);
    return fnv1a(buf);
}

} // namespace cuckoo
