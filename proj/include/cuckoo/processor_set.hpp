#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuckoo {

// A set of processor ids over a universe of at most 64 processors,
// backed by a fixed-width bitmask.
class ProcessorSet {
  public:
    static constexpr int kMaxUniverse = 64;

    ProcessorSet() = default;

    explicit ProcessorSet(std::initializer_list<int> ids) {
        for (int id : ids) insert(id);
    }

    static ProcessorSet full(int n) {
        check_id_range(n - 1);
        ProcessorSet s;
        s.bits_ = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
        return s;
    }

    static ProcessorSet from_bits(std::uint64_t bits) {
        ProcessorSet s;
        s.bits_ = bits;
        return s;
    }

    void insert(int id) {
        check_id_range(id);
        bits_ |= (1ULL << id);
    }

    void erase(int id) {
        check_id_range(id);
        bits_ &= ~(1ULL << id);
    }

    bool contains(int id) const {
        return id >= 0 && id < kMaxUniverse && (bits_ >> id) & 1ULL;
    }

    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }

    bool subset_of(const ProcessorSet& other) const {
        return (bits_ & ~other.bits_) == 0;
    }

    ProcessorSet united(const ProcessorSet& o) const { return from_bits(bits_ | o.bits_); }
    ProcessorSet intersected(const ProcessorSet& o) const { return from_bits(bits_ & o.bits_); }
    ProcessorSet minus(const ProcessorSet& o) const { return from_bits(bits_ & ~o.bits_); }

    ProcessorSet complement(int universe) const {
        return full(universe).minus(*this);
    }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int i = 0; i < kMaxUniverse; ++i)
            if (contains(i)) out.push_back(i);
        return out;
    }

    std::uint64_t bits() const { return bits_; }

    std::string to_string() const {
        std::string s = "{";
        bool first = true;
        for (int i = 0; i < kMaxUniverse; ++i) {
            if (!contains(i)) continue;
            if (!first) s += ",";
            s += std::to_string(i);
            first = false;
        }
        s += "}";
        return s;
    }

    friend bool operator==(const ProcessorSet& a, const ProcessorSet& b) { return a.bits_ == b.bits_; }
    friend bool operator!=(const ProcessorSet& a, const ProcessorSet& b) { return a.bits_ != b.bits_; }
    friend bool operator<(const ProcessorSet& a, const ProcessorSet& b) { return a.bits_ < b.bits_; }

  private:
    static void check_id_range(int id) {
        if (id < 0 || id >= kMaxUniverse)
            throw std::invalid_argument("processor id out of range [0,64): " + std::to_string(id));
    }

    std::uint64_t bits_ = 0;
};

} // namespace cuckoo
