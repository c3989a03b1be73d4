#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seqrules/core.hpp"

// Candidate rule generation: a rule is extended with events that occur
// significantly more often than expected inside or directly adjacent to its
// best rule windows. The null model is a Poisson binomial over the windows,
// approximated by a normal with continuity correction for more than 10
// trials.

namespace seqrules {

// Insertion slot: h_i inserts before head symbol i (h_|head| appends), t_i
// likewise for the tail. For empty-head rules, h_0 creates a head.
struct Slot {
    bool in_head;
    std::int32_t index;

    bool operator==(const Slot&) const = default;
};

inline std::int32_t slot_rank(const Slot& s, std::size_t head_len) {
    return s.in_head ? s.index : static_cast<std::int32_t>(head_len) + 1 + s.index;
}

// All insertion slots of a rule: h_0..h_|head|, t_0..t_|tail|.
std::vector<Slot> insertion_slots(const Rule& rule);

Rule insert_event(const Rule& rule, EventId e, const Slot& slot);

// The positions a slot looks at inside one window: gap positions between the
// adjacent matched symbols, the delay region for head-append/tail-prepend,
// or ceil(max_gap)+1 positions just outside the window for the boundary
// slots (clipped to the sequence).
std::vector<std::uint32_t> gap_region(const DbIndex& idx, const Rule& rule,
                                      const RuleWindow& win, const Slot& slot,
                                      const SearchParams& params);

// Probability that event e appears at least once in a region of the given
// length, under the per-position rate freq(e) / ||D||.
double occurrence_probability(const DbIndex& idx, EventId e, std::int64_t region_length);

struct SigResult {
    bool significant = false;
    double p_value = 1.0;
};

// count: windows whose region contains the event; probs: per-window
// occurrence probability. More than 10 trials: one-sided normal test with
// continuity correction at level alpha. Otherwise: significant iff the
// count exceeds the expectation by more than one (p-value pinned to 0/1).
SigResult significance_test(std::int64_t count, std::span<const double> probs, double alpha);

// Moment form used by cand_rules; n is the number of trials.
SigResult significance_test_moments(std::int64_t count, std::int64_t n, double mean,
                                    double variance, double alpha);

struct Candidate {
    Rule rule;
    Rule parent;
    Slot slot;
    EventId inserted;
    double p_value = 1.0;

    bool operator==(const Candidate&) const = default;
};

// Significant one-event extensions of `rule`, ordered by (p-value, slot,
// event id).
std::vector<Candidate> cand_rules(RuleCache& cache, const Rule& rule,
                                  const SearchParams& params);

}  // namespace seqrules
