#include "cuckoo/adversary_structure.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cuckoo {

namespace {

void enumerate_subsets_of_size(int n, int k, int start, ProcessorSet cur,
                               std::vector<ProcessorSet>& out) {
    if (k == 0) {
        out.push_back(cur);
        return;
    }
    for (int i = start; i <= n - k; ++i) {
        ProcessorSet next = cur;
        next.insert(i);
        enumerate_subsets_of_size(n, k - 1, i + 1, next, out);
    }
}

std::vector<ProcessorSet> prune_to_antichain(std::vector<ProcessorSet> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::vector<ProcessorSet> keep;
    for (const auto& s : sets) {
        bool dominated = false;
        for (const auto& other : sets) {
            if (s != other && s.subset_of(other)) {
                dominated = true;
                break;
            }
        }
        if (!dominated) keep.push_back(s);
    }
    return keep;
}

} // namespace

BadSetCollection BadSetCollection::threshold_collection(int n, int t) {
    if (n < 1 || n > ProcessorSet::kMaxUniverse)
        throw std::invalid_argument("universe size must be in [1,64], got " + std::to_string(n));
    if (t < 0 || t >= n)
        throw std::invalid_argument("threshold requires 0 <= t < n, got t=" + std::to_string(t) +
                                    " n=" + std::to_string(n));
    // C(n, t) maximal sets get materialized; keep that within desk scale
    std::uint64_t count = 1;
    for (int i = 1; i <= t; ++i) {
        count = count * static_cast<std::uint64_t>(n - i + 1) / static_cast<std::uint64_t>(i);
        if (count > 1000000)
            throw std::invalid_argument("threshold collection too large: C(" + std::to_string(n) +
                                        "," + std::to_string(t) + ") maximal sets");
    }
    std::vector<ProcessorSet> maximal;
    maximal.reserve(count);
    enumerate_subsets_of_size(n, t, 0, ProcessorSet{}, maximal);
    return BadSetCollection(n, std::move(maximal), t);
}

BadSetCollection BadSetCollection::from_maximal_sets(int n, std::vector<ProcessorSet> sets) {
    if (n < 1 || n > ProcessorSet::kMaxUniverse)
        throw std::invalid_argument("universe size must be in [1,64], got " + std::to_string(n));
    const ProcessorSet universe = ProcessorSet::full(n);
    for (const auto& s : sets) {
        if (!s.subset_of(universe))
            throw std::invalid_argument("maximal set " + s.to_string() + " not within universe");
        if (s == universe)
            throw std::invalid_argument("maximal set may not equal the whole universe");
    }
    auto antichain = prune_to_antichain(std::move(sets));
    if (antichain.empty()) antichain.push_back(ProcessorSet{}); // the empty set is always bad
    return BadSetCollection(n, std::move(antichain), -1);
}

bool BadSetCollection::is_bad(const ProcessorSet& s) const {
    for (const auto& m : maximal_)
        if (s.subset_of(m)) return true;
    return false;
}

bool BadSetCollection::contains_good_set(const ProcessorSet& s) const {
    return is_bad(s.complement(n_));
}

bool BadSetCollection::exceeds_every_bad_set(const ProcessorSet& s) const {
    return !is_bad(s);
}

bool BadSetCollection::satisfies_benign_predicate() const {
    const ProcessorSet universe = ProcessorSet::full(n_);
    for (std::size_t i = 0; i < maximal_.size(); ++i)
        for (std::size_t j = i; j < maximal_.size(); ++j)
            if (maximal_[i].united(maximal_[j]) == universe) return false;
    return true;
}

bool BadSetCollection::satisfies_byzantine_predicate() const {
    const ProcessorSet universe = ProcessorSet::full(n_);
    for (std::size_t i = 0; i < maximal_.size(); ++i)
        for (std::size_t j = i; j < maximal_.size(); ++j) {
            const ProcessorSet ij = maximal_[i].united(maximal_[j]);
            for (std::size_t k = j; k < maximal_.size(); ++k)
                if (ij.united(maximal_[k]) == universe) return false;
        }
    return true;
}

std::vector<ProcessorSet> BadSetCollection::minimal_good_sets() const {
    std::vector<ProcessorSet> out;
    out.reserve(maximal_.size());
    for (const auto& m : maximal_) out.push_back(m.complement(n_));
    return out;
}

} // namespace cuckoo
