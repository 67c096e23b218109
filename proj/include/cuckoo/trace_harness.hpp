#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cuckoo/adversary_structure.hpp"
#include "cuckoo/trace.hpp"

namespace cuckoo {

enum class Verdict { PASS, FAIL, VACUOUS, INCONCLUSIVE };

const char* verdict_name(Verdict v);

struct PropertyReport {
    std::string id;
    Verdict verdict = Verdict::VACUOUS;
    std::string witness; // mandatory for FAIL: first violating seq or assignment
};

struct CheckOptions {
    // property ids to run; empty = all applicable
    std::vector<std::string> only;
    // cuckoo fallback search parameters
    std::vector<std::int64_t> candidate_domain;
    std::uint64_t search_cap = 200000;
    bool force_replay = false;        // skip the epsilon shortcut, always replay
    bool full_schedule_search = false; // small n only: also search omission schedules
};

// One report per property id. Eventuality clauses are enforced only when the
// trace header says the run drained inside its fault-quiet extension;
// otherwise the affected property is VACUOUS rather than silently green.
std::vector<PropertyReport> check_broadcast_properties(const Trace& trace,
                                                       const BadSetCollection& coll);
std::vector<PropertyReport> check_common_core(const Trace& trace, const BadSetCollection& coll);
std::vector<PropertyReport> check_network_properties(const Trace& trace,
                                                     const BadSetCollection& coll);
std::vector<PropertyReport> check_replica_agreement(const Trace& trace);
PropertyReport check_cuckoo_equivalence(const Trace& trace, const BadSetCollection& coll,
                                        const CheckOptions& opts);

// Every applicable check, optionally filtered by opts.only.
std::vector<PropertyReport> run_all_checks(const Trace& trace, const CheckOptions& opts = {});

bool all_pass(const std::vector<PropertyReport>& reports); // no FAIL and no INCONCLUSIVE
std::string render_report(const std::vector<PropertyReport>& reports);
std::string report_to_json(const std::vector<PropertyReport>& reports);

} // namespace cuckoo
