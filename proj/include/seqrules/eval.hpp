#pragma once

#include <cstdint>
#include <vector>

#include "seqrules/core.hpp"

// Rule-recovery metrics: similarity between rules is an LCS-based pattern
// similarity weighted over the concatenation, head, and tail. Recall sums
// each true rule's best match; precision keeps only the |T| best matches of
// the mined rules to penalize redundancy.

namespace seqrules {

// Edit distance without substitution: |a| + |b| - 2 |lcs|.
std::int64_t lcs_distance(const Pattern& a, const Pattern& b);

// 1 - lcs_distance / (|a| + |b|); two empty patterns are identical (1),
// an empty vs a non-empty pattern is disjoint (0).
double pattern_sim(const Pattern& a, const Pattern& b);

// sim(concat)/2 + sim(heads)/4 + sim(tails)/4.
double rule_sim(const Rule& a, const Rule& b);

double recall(const std::vector<Rule>& truth, const std::vector<Rule>& mined);
double precision(const std::vector<Rule>& truth, const std::vector<Rule>& mined);

struct MatchEntry {
    Rule truth;
    Rule best_mined;  // meaningful only when sim > 0 and mined is non-empty
    double sim = 0;
};

struct EvalReport {
    double recall = 0;
    double precision = 0;
    double f1 = 0;
    std::vector<MatchEntry> matches;  // one per true rule
};

// Singletons in the mined model are scaffolding, excluded by default.
EvalReport evaluate(const std::vector<Rule>& truth, const std::vector<Rule>& mined,
                    bool exclude_singletons = true);

}  // namespace seqrules
