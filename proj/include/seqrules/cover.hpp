#pragma once

#include <cstdint>
#include <vector>

#include "seqrules/core.hpp"

// Greedy cover: selects rule windows so that every event in the database is
// covered by exactly one window. Selection order prefers long tails, high
// confidence, high support, then low slack (delay plus tail gaps) and early
// tail starts.

namespace seqrules {

struct SelectedWindow {
    std::int32_t rule_index;  // canonical index into the rule set
    RuleWindow win;
};

struct Cover {
    std::vector<SelectedWindow> windows;             // in selection order
    std::vector<std::int64_t> usage;                 // per canonical rule index
    std::vector<std::vector<std::int32_t>> covered;  // [seq][pos-1] -> window ordinal
};

// Composite ordering key for a candidate window. Lower key = selected first.
struct WindowOrderKey {
    std::int32_t tail_len;   // descending
    double confidence;       // descending
    std::int64_t support;    // descending
    std::int64_t slack;      // ascending: l-j-|tail|, or the tail gap count
                             // for empty-head windows
    std::uint32_t k;         // ascending
    std::int32_t seq;        // ascending
    std::uint32_t i;         // ascending (k again for empty-head windows)
    std::int32_t rule_index; // ascending

    bool operator<(const WindowOrderKey& o) const;
};

WindowOrderKey window_order_key(std::int32_t rule_index, const RuleWindow& win,
                                const RuleStats& stats);

Cover cover(const DbIndex& idx, const RuleSet& rules, RuleCache& cache,
            const SearchParams& params);

}  // namespace seqrules
