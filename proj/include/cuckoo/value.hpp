#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cuckoo/processor_set.hpp"

namespace cuckoo {

// Exact dyadic rational num / 2^exp. The approximate-agreement payload carries
// these so replicas agree bit-for-bit; no floating point anywhere.
struct Dyadic {
    std::int64_t num = 0;
    int exp = 0; // >= 0

    Dyadic() = default;
    explicit Dyadic(std::int64_t integer) : num(integer), exp(0) {}
    Dyadic(std::int64_t n, int e) : num(n), exp(e) { normalize(); }

    void normalize() {
        while (exp > 0 && (num & 1) == 0) {
            num >>= 1;
            --exp;
        }
        if (num == 0) exp = 0;
    }

    static Dyadic midpoint(const Dyadic& a, const Dyadic& b) {
        int e = std::max(a.exp, b.exp);
        std::int64_t na = a.num << (e - a.exp);
        std::int64_t nb = b.num << (e - b.exp);
        return Dyadic(na + nb, e + 1);
    }

    std::int64_t floor() const {
        if (exp == 0) return num;
        std::int64_t q = num >> exp; // arithmetic shift: floors negatives too
        return q;
    }

    std::string to_string() const {
        if (exp == 0) return std::to_string(num);
        return std::to_string(num) + "/2^" + std::to_string(exp);
    }

    friend bool operator==(const Dyadic& a, const Dyadic& b) { return a.num == b.num && a.exp == b.exp; }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
    friend bool operator<(const Dyadic& a, const Dyadic& b) {
        int e = std::max(a.exp, b.exp);
        return (a.num << (e - a.exp)) < (b.num << (e - b.exp));
    }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return a < b || a == b; }

    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) {
        int e = std::max(a.exp, b.exp);
        return Dyadic((a.num << (e - a.exp)) - (b.num << (e - b.exp)), e);
    }
};

// The one payload type that flows everywhere: broadcast wire payloads (Int for
// round-1 inputs, IdSet for later rounds), simulated-protocol messages and
// states (Rational), and protocol outputs (Int or IntList). Tampering may swap
// kinds freely; handlers treat unexpected kinds as malformed.
class Value {
  public:
    enum class Kind : std::uint8_t { None = 0, Int = 1, IdSet = 2, Rational = 3, IntList = 4 };

    Value() = default;
    static Value none() { return Value(); }
    static Value integer(std::int64_t v) {
        Value x;
        x.kind_ = Kind::Int;
        x.int_ = v;
        return x;
    }
    static Value id_set(ProcessorSet s) {
        Value x;
        x.kind_ = Kind::IdSet;
        x.ids_ = s;
        return x;
    }
    static Value rational(Dyadic d) {
        Value x;
        x.kind_ = Kind::Rational;
        x.rat_ = d;
        return x;
    }
    static Value int_list(std::vector<std::int64_t> v) {
        Value x;
        x.kind_ = Kind::IntList;
        x.list_ = std::move(v);
        return x;
    }

    Kind kind() const { return kind_; }
    bool is_none() const { return kind_ == Kind::None; }
    bool is_int() const { return kind_ == Kind::Int; }
    bool is_id_set() const { return kind_ == Kind::IdSet; }
    bool is_rational() const { return kind_ == Kind::Rational; }
    bool is_int_list() const { return kind_ == Kind::IntList; }

    std::int64_t as_int() const { return int_; }
    const ProcessorSet& as_id_set() const { return ids_; }
    const Dyadic& as_rational() const { return rat_; }
    const std::vector<std::int64_t>& as_int_list() const { return list_; }

    // Any scalar read back as an exact rational (Int promotes).
    Dyadic to_rational() const { return is_int() ? Dyadic(int_) : rat_; }

    void serialize(std::vector<std::uint8_t>& out) const;
    std::string brief() const;

    friend bool operator==(const Value& a, const Value& b);
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }
    friend bool operator<(const Value& a, const Value& b);

  private:
    Kind kind_ = Kind::None;
    std::int64_t int_ = 0;
    ProcessorSet ids_;
    Dyadic rat_;
    std::vector<std::int64_t> list_;
};

// FNV-1a over a byte buffer; digests for trace records and replica states.
std::uint64_t fnv1a(const std::vector<std::uint8_t>& bytes);
std::uint64_t digest_of(const Value& v);

} // namespace cuckoo
