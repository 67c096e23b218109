#pragma once

#include <vector>

#include "cuckoo/processor_set.hpp"

namespace cuckoo {

// A subset-closed collection of potentially-faulty processor sets, stored as the
// antichain of its maximal sets. Membership ("is this set one the adversary may
// control?") is a subset test against the maximal sets, so the subset closure is
// never materialized.
//
// The two solvability predicates:
//   benign    — no two bad sets cover the universe
//   byzantine — no three bad sets cover the universe
// are evaluated over maximal sets only; covering unions are monotone so that is
// equivalent to quantifying over the whole closure.
class BadSetCollection {
  public:
    // All sets of cardinality <= t over a universe of n processors.
    // t = 0 yields the collection whose only member is the empty set.
    static BadSetCollection threshold_collection(int n, int t);

    // Explicit maximal sets; subsets and duplicates are pruned to an antichain.
    // No maximal set may equal the full universe.
    static BadSetCollection from_maximal_sets(int n, std::vector<ProcessorSet> sets);

    int universe_size() const { return n_; }
    const std::vector<ProcessorSet>& maximal_sets() const { return maximal_; }

    // Threshold t when this collection was built via threshold_collection, else -1.
    int threshold() const { return threshold_; }

    // s is a member of the collection (subset of some maximal set).
    bool is_bad(const ProcessorSet& s) const;

    // s contains some good set, i.e. the complement of s is bad.
    bool contains_good_set(const ProcessorSet& s) const;

    // s is not contained in any bad set: whatever single set the adversary
    // controls, s has a member outside it.
    bool exceeds_every_bad_set(const ProcessorSet& s) const;

    bool satisfies_benign_predicate() const;
    bool satisfies_byzantine_predicate() const;

    // Minimal good sets (complements of maximal sets); enough for universally
    // quantified good-set checks.
    std::vector<ProcessorSet> minimal_good_sets() const;

  private:
    BadSetCollection(int n, std::vector<ProcessorSet> maximal, int threshold)
        : n_(n), maximal_(std::move(maximal)), threshold_(threshold) {}

    int n_ = 0;
    std::vector<ProcessorSet> maximal_;
    int threshold_ = -1;
};

} // namespace cuckoo
