#include "seqrules/cover.hpp"

#include <queue>
#include <stdexcept>
#include <tuple>

namespace seqrules {

bool WindowOrderKey::operator<(const WindowOrderKey& o) const {
    return std::tie(o.tail_len, o.confidence, o.support, slack, k, seq, i, rule_index) <
           std::tie(tail_len, confidence, support, o.slack, o.k, o.seq, o.i, o.rule_index);
}

WindowOrderKey window_order_key(std::int32_t rule_index, const RuleWindow& win,
                                const RuleStats& stats) {
    WindowOrderKey key;
    key.tail_len = static_cast<std::int32_t>(win.tail->matched.size());
    key.confidence = stats.confidence;
    key.support = stats.support;
    key.slack = win.head
                    ? static_cast<std::int64_t>(win.l()) - win.head->end - key.tail_len
                    : win.tail->gap_count();
    key.k = win.k();
    key.seq = win.seq;
    key.i = win.head ? win.head->start : win.k();
    key.rule_index = rule_index;
    return key;
}

namespace {

struct HeapEntry {
    WindowOrderKey key;
    std::int32_t rule_index;
    RuleWindow win;
};

struct HeapAfter {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const { return b.key < a.key; }
};

}  // namespace

Cover cover(const DbIndex& idx, const RuleSet& rules, RuleCache& cache,
            const SearchParams& params) {
    const auto& db = idx.db();
    Cover out;
    out.usage.assign(rules.size(), 0);
    out.covered.resize(db.sequences.size());
    std::size_t uncovered = 0;
    for (std::size_t s = 0; s < db.sequences.size(); ++s) {
        out.covered[s].assign(db.sequences[s].size(), -1);
        uncovered += db.sequences[s].size();
    }

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapAfter> heap;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules.at(r);
        const RuleStats& stats = cache.stats(rule);
        for (const RuleWindow& w : cache.windows(rule))
            heap.push({window_order_key(static_cast<std::int32_t>(r), w, stats),
                       static_cast<std::int32_t>(r), w});
    }

    while (uncovered > 0) {
        if (heap.empty())
            throw std::logic_error("cover: ran out of windows with events uncovered");
        HeapEntry e = heap.top();
        heap.pop();
        auto& covmap = out.covered[static_cast<std::size_t>(e.win.seq)];
        bool conflict = false;
        for (std::uint32_t p : e.win.covered())
            if (covmap[p - 1] >= 0) { conflict = true; break; }
        if (!conflict) {
            const std::int32_t ord = static_cast<std::int32_t>(out.windows.size());
            for (std::uint32_t p : e.win.covered())
                covmap[p - 1] = ord;
            uncovered -= e.win.covered().size();
            ++out.usage[static_cast<std::size_t>(e.rule_index)];
            out.windows.push_back(SelectedWindow{e.rule_index, e.win});
            continue;
        }
        // Conflicting window of a triggered rule: queue the next tail window
        // for the same trigger, if any. Conflicting empty-head windows are
        // simply dropped; all of their alternatives are already queued.
        if (e.win.head) {
            const Rule& rule = rules.at(static_cast<std::size_t>(e.rule_index));
            const MinWin* next = next_best_tail(idx, rule, static_cast<std::size_t>(e.win.seq),
                                                *e.win.head, covmap, params);
            if (next) {
                RuleWindow w{e.win.seq, e.win.head, next};
                heap.push({window_order_key(e.rule_index, w, cache.stats(rule)),
                           e.rule_index, w});
            }
        }
    }
    return out;
}

}  // namespace seqrules
