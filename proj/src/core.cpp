#include "seqrules/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace seqrules {

EventId Alphabet::intern(const std::string& token) {
    auto it = ids_.find(token);
    if (it != ids_.end())
        return it->second;
    EventId id = static_cast<EventId>(tokens_.size());
    tokens_.push_back(token);
    ids_.emplace(token, id);
    return id;
}

std::optional<EventId> Alphabet::find(const std::string& token) const {
    auto it = ids_.find(token);
    if (it == ids_.end())
        return std::nullopt;
    return it->second;
}

const std::string& Alphabet::token(EventId id) const {
    return tokens_.at(id);
}

std::size_t SequenceDatabase::total_events() const {
    std::size_t n = 0;
    for (const auto& s : sequences)
        n += s.size();
    return n;
}

RuleSet::RuleSet(std::size_t alphabet_size) : alphabet_size_(alphabet_size) {
    singles_.reserve(alphabet_size);
    for (std::size_t e = 0; e < alphabet_size; ++e)
        singles_.push_back(singleton_rule(static_cast<EventId>(e)));
}

const Rule& RuleSet::at(std::size_t canonical_index) const {
    if (canonical_index < alphabet_size_)
        return singles_[canonical_index];
    return extras_.at(canonical_index - alphabet_size_);
}

bool RuleSet::contains(const Rule& r) const {
    if (r.is_singleton())
        return r.tail[0] < alphabet_size_;
    return std::find(extras_.begin(), extras_.end(), r) != extras_.end();
}

std::optional<std::size_t> RuleSet::index_of(const Rule& r) const {
    if (r.is_singleton()) {
        if (r.tail[0] < alphabet_size_)
            return static_cast<std::size_t>(r.tail[0]);
        return std::nullopt;
    }
    auto it = std::find(extras_.begin(), extras_.end(), r);
    if (it == extras_.end())
        return std::nullopt;
    return alphabet_size_ + static_cast<std::size_t>(it - extras_.begin());
}

bool RuleSet::add(const Rule& r) {
    if (r.tail.empty())
        throw std::invalid_argument("rule must have a non-empty tail");
    for (EventId e : r.head)
        if (e >= alphabet_size_)
            throw std::invalid_argument("rule event outside alphabet");
    for (EventId e : r.tail)
        if (e >= alphabet_size_)
            throw std::invalid_argument("rule event outside alphabet");
    if (contains(r))
        return false;
    extras_.push_back(r);
    return true;
}

void RuleSet::pop_back() {
    extras_.pop_back();
}

Rule RuleSet::erase_extra(std::size_t extra_index) {
    Rule r = std::move(extras_.at(extra_index));
    extras_.erase(extras_.begin() + static_cast<std::ptrdiff_t>(extra_index));
    return r;
}

void RuleSet::insert_extra(std::size_t extra_index, Rule r) {
    extras_.insert(extras_.begin() + static_cast<std::ptrdiff_t>(extra_index), std::move(r));
}

namespace {

using PositionLists = std::vector<std::vector<std::uint32_t>>;  // [event] -> positions

// First position of `e` strictly greater than `after`, or 0.
std::uint32_t next_at(const std::vector<std::uint32_t>& v, std::uint32_t after) {
    auto it = std::upper_bound(v.begin(), v.end(), after);
    return it == v.end() ? 0 : *it;
}

// Last position of `e` strictly smaller than `before`, or 0.
std::uint32_t prev_at(const std::vector<std::uint32_t>& v, std::uint32_t before) {
    auto it = std::lower_bound(v.begin(), v.end(), before);
    return it == v.begin() ? 0 : *(it - 1);
}

// Enumerates all minimal windows of `pattern`: repeatedly take the earliest
// occurrence starting at or after the cursor, shrink it from the left to the
// latest start for that end, emit, and restart just past the emitted start.
// Minimal windows neither nest nor share endpoints, so this finds each one
// exactly once, in order.
std::vector<MinWin> minimal_windows_impl(const PositionLists& pos, const Pattern& pattern) {
    std::vector<MinWin> out;
    const std::size_t m = pattern.size();
    std::uint32_t from = 1;
    std::vector<std::uint32_t> fwd(m);
    for (;;) {
        std::uint32_t cur = from - 1;
        bool ok = true;
        for (std::size_t t = 0; t < m; ++t) {
            cur = next_at(pos[pattern[t]], cur);
            if (cur == 0) { ok = false; break; }
            fwd[t] = cur;
        }
        if (!ok)
            break;
        const std::uint32_t end = fwd[m - 1];
        std::uint32_t bound = end + 1;
        for (std::size_t t = m; t-- > 0;) {
            bound = prev_at(pos[pattern[t]], bound);
        }
        // bound is now the latest start of an occurrence ending at `end`.
        MinWin w;
        w.start = bound;
        w.end = end;
        w.matched.resize(m);
        std::uint32_t cur2 = bound - 1;
        for (std::size_t t = 0; t < m; ++t) {
            cur2 = next_at(pos[pattern[t]], cur2);
            w.matched[t] = cur2;
        }
        from = w.start + 1;
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace

std::vector<MinWin> minimal_windows(const Pattern& pattern, const Sequence& seq,
                                    double max_gap) {
    if (pattern.empty())
        throw std::invalid_argument("minimal_windows: empty pattern");
    EventId max_e = 0;
    for (EventId e : seq)
        max_e = std::max(max_e, e);
    for (EventId e : pattern)
        max_e = std::max(max_e, e);
    std::vector<std::vector<std::uint32_t>> pos(max_e + 1);
    for (std::size_t p = 0; p < seq.size(); ++p)
        pos[seq[p]].push_back(static_cast<std::uint32_t>(p + 1));
    auto wins = minimal_windows_impl(pos, pattern);
    std::erase_if(wins, [&](const MinWin& w) {
        return !gap_within_budget(w.gap_count(), pattern.size(), max_gap);
    });
    return wins;
}

DbIndex::DbIndex(const SequenceDatabase& db) : db_(&db) {
    const std::size_t omega = db.alphabet.size();
    freq_.assign(omega, 0);
    pos_.resize(db.sequences.size());
    for (std::size_t s = 0; s < db.sequences.size(); ++s) {
        pos_[s].resize(omega);
        const Sequence& seq = db.sequences[s];
        for (std::size_t p = 0; p < seq.size(); ++p) {
            if (seq[p] >= omega)
                throw std::invalid_argument("event id outside alphabet");
            pos_[s][seq[p]].push_back(static_cast<std::uint32_t>(p + 1));
            ++freq_[seq[p]];
        }
        total_ += static_cast<std::int64_t>(seq.size());
    }
}

const DbIndex::PatternEntry& DbIndex::entry(const Pattern& pattern) const {
    auto it = cache_.find(pattern);
    if (it != cache_.end())
        return it->second;
    if (pattern.empty())
        throw std::invalid_argument("minimal windows of an empty pattern");
    PatternEntry e;
    e.per_seq.resize(db_->sequences.size());
    for (std::size_t s = 0; s < db_->sequences.size(); ++s)
        e.per_seq[s] = minimal_windows_impl(pos_[s], pattern);
    return cache_.emplace(pattern, std::move(e)).first->second;
}

const std::vector<MinWin>& DbIndex::minimal_all(std::size_t seq, const Pattern& pattern) const {
    return entry(pattern).per_seq.at(seq);
}

std::int64_t trigger_count(const DbIndex& idx, const Rule& rule, const SearchParams& params) {
    if (rule.empty_head())
        throw std::invalid_argument("trigger_count: rule has an empty head");
    std::int64_t n = 0;
    for (std::size_t s = 0; s < idx.num_sequences(); ++s) {
        for (const MinWin& w : idx.minimal_all(s, rule.head))
            if (gap_within_budget(w.gap_count(), rule.head.size(), params.max_gap))
                ++n;
    }
    return n;
}

namespace {

bool delay_within_budget(std::int64_t delay, std::size_t tail_len, double max_delay) {
    return static_cast<double>(delay) <= max_delay * static_cast<double>(tail_len);
}

// Index of the first tail window starting strictly after position j.
std::size_t first_after(const std::vector<MinWin>& wins, std::uint32_t j) {
    auto it = std::upper_bound(wins.begin(), wins.end(), j,
                               [](std::uint32_t v, const MinWin& w) { return v < w.start; });
    return static_cast<std::size_t>(it - wins.begin());
}

const MinWin* pick_tail(const std::vector<MinWin>& tails, const MinWin& head,
                        std::size_t tail_len, const SearchParams& params) {
    const MinWin* best = nullptr;
    for (std::size_t t = first_after(tails, head.end); t < tails.size(); ++t) {
        const MinWin& cand = tails[t];
        const std::int64_t delay = static_cast<std::int64_t>(cand.start) - head.end - 1;
        if (!delay_within_budget(delay, tail_len, params.max_delay))
            break;
        if (!gap_within_budget(cand.gap_count(), tail_len, params.max_gap))
            continue;
        if (params.best_window == SearchParams::BestWindow::Nearest)
            return &cand;
        if (!best || cand.gap_count() < best->gap_count())
            best = &cand;  // equal gap count keeps the earlier (lower-delay) window
    }
    return best;
}

}  // namespace

std::vector<RuleWindow> best_rule_windows(const DbIndex& idx, const Rule& rule,
                                          const SearchParams& params) {
    if (rule.tail.empty())
        throw std::invalid_argument("best_rule_windows: rule has an empty tail");
    std::vector<RuleWindow> out;
    for (std::size_t s = 0; s < idx.num_sequences(); ++s) {
        const auto& tails = idx.minimal_all(s, rule.tail);
        if (rule.empty_head()) {
            for (const MinWin& w : tails)
                if (gap_within_budget(w.gap_count(), rule.tail.size(), params.max_gap))
                    out.push_back(RuleWindow{static_cast<std::int32_t>(s), nullptr, &w});
            continue;
        }
        for (const MinWin& h : idx.minimal_all(s, rule.head)) {
            if (!gap_within_budget(h.gap_count(), rule.head.size(), params.max_gap))
                continue;
            if (const MinWin* t = pick_tail(tails, h, rule.tail.size(), params))
                out.push_back(RuleWindow{static_cast<std::int32_t>(s), &h, t});
        }
    }
    return out;
}

RuleStats rule_stats(const DbIndex& idx, const Rule& rule, const SearchParams& params) {
    RuleStats st;
    const auto wins = best_rule_windows(idx, rule, params);
    st.support = static_cast<std::int64_t>(wins.size());
    if (rule.empty_head()) {
        // Empty-head rules are unconditional: every qualifying tail window
        // counts as support and the confidence is 1 by convention.
        st.trigger_count = st.support;
        st.confidence = 1.0;
        return st;
    }
    st.trigger_count = trigger_count(idx, rule, params);
    st.confidence = st.trigger_count == 0
                        ? 0.0
                        : static_cast<double>(st.support) / static_cast<double>(st.trigger_count);
    return st;
}

const MinWin* next_best_tail(const DbIndex& idx, const Rule& rule, std::size_t seq,
                             const MinWin& head, std::span<const std::int32_t> covered,
                             const SearchParams& params) {
    if (rule.empty_head())
        throw std::invalid_argument("next_best_tail: rule has an empty head");
    const auto& tails = idx.minimal_all(seq, rule.tail);
    for (std::size_t t = first_after(tails, head.end); t < tails.size(); ++t) {
        const MinWin& cand = tails[t];
        const std::int64_t delay = static_cast<std::int64_t>(cand.start) - head.end - 1;
        if (!delay_within_budget(delay, rule.tail.size(), params.max_delay))
            break;
        if (!gap_within_budget(cand.gap_count(), rule.tail.size(), params.max_gap))
            continue;
        bool free = true;
        for (std::uint32_t p : cand.matched) {
            if (covered[p - 1] >= 0) { free = false; break; }
        }
        if (free)
            return &cand;
    }
    return nullptr;
}

const RuleStats& RuleCache::stats(const Rule& r) {
    auto& e = entries_[r];
    if (!e.filled) {
        e.windows = best_rule_windows(*idx_, r, params_);
        e.stats.support = static_cast<std::int64_t>(e.windows.size());
        if (r.empty_head()) {
            e.stats.trigger_count = e.stats.support;
            e.stats.confidence = 1.0;
        } else {
            e.stats.trigger_count = trigger_count(*idx_, r, params_);
            e.stats.confidence =
                e.stats.trigger_count == 0
                    ? 0.0
                    : static_cast<double>(e.stats.support) /
                          static_cast<double>(e.stats.trigger_count);
        }
        e.filled = true;
    }
    return e.stats;
}

const std::vector<RuleWindow>& RuleCache::windows(const Rule& r) {
    stats(r);
    return entries_[r].windows;
}

}  // namespace seqrules
