#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "seqrules/candgen.hpp"
#include "seqrules/codec.hpp"
#include "seqrules/core.hpp"
#include "seqrules/cover.hpp"

// Rule set search. Two strategies share the same score:
//  - mine(): start from singletons and grow rules via significant candidate
//    extensions, accepting an addition (or a replacement of the candidate's
//    parent) only when it shaves off at least ceil(log2(1/alpha)) bits,
//    pruning after every accepted update.
//  - mine_from_patterns(): split externally supplied patterns into rules and
//    keep each pattern's best split when it improves the score at all.

namespace seqrules {

struct Score {
    ModelCost model;
    DataCost data;
    double total = 0;
};

Score score_model(const DbIndex& idx, const RuleSet& rules, RuleCache& cache,
                  const SearchParams& params);

// The |pattern| head/tail splits of a pattern, from the empty head onward.
std::vector<Rule> split(const Pattern& pattern);

// True when old_bits - new_bits reaches the no-hypercompression threshold
// ceil(log2(1/alpha)) (5 bits at alpha = 0.05).
bool significant_gain(double old_bits, double new_bits, double alpha);

enum class UpdateKind { Add, Replace, Prune };

struct UpdateRecord {
    UpdateKind kind;
    std::optional<Rule> added;
    std::optional<Rule> removed;
    double before = 0;
    double after = 0;
};

struct MineResult {
    RuleSet rules;
    Cover cover;
    double final_score = 0;
    double null_score = 0;
    int passes = 0;
    std::int64_t candidates_tested = 0;
    std::vector<UpdateRecord> updates;
};

// `trace` logs accepted updates; `dump_candidates` logs every generated
// candidate with its p-value (both optional, both line-oriented).
MineResult mine(const SequenceDatabase& db, const SearchParams& params,
                std::ostream* trace = nullptr, std::ostream* dump_candidates = nullptr);

MineResult mine_from_patterns(const SequenceDatabase& db, const std::vector<Pattern>& patterns,
                              const SearchParams& params, std::ostream* trace = nullptr);

// One pass over the non-singleton rules in prune order (lowest usage,
// highest encoded size, shortest tail), removing each rule whose exclusion
// strictly lowers the total score.
RuleSet prune(const DbIndex& idx, RuleSet rules, RuleCache& cache, const SearchParams& params);

}  // namespace seqrules
