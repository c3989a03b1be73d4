#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

// Core domain types for mining sequential rules (head -> tail over event
// sequences), plus window matching and rule statistics. Positions are
// 1-based everywhere window arithmetic is concerned; sequences themselves
// are plain 0-indexed vectors.

namespace seqrules {

using EventId = std::uint32_t;
using Pattern = std::vector<EventId>;
using Sequence = std::vector<EventId>;

// Token <-> dense id mapping. Ids are assigned in first-seen order.
class Alphabet {
public:
    EventId intern(const std::string& token);
    std::optional<EventId> find(const std::string& token) const;
    const std::string& token(EventId id) const;
    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, EventId> ids_;
};

struct SequenceDatabase {
    Alphabet alphabet;
    std::vector<Sequence> sequences;

    std::size_t total_events() const;
};

struct PatternHash {
    std::size_t operator()(const Pattern& p) const noexcept {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (EventId e : p)
            h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// A sequential rule head -> tail. The head may be empty ("empty-head rule");
// the tail never is. An empty-head rule with a single tail event is a
// "singleton"; singletons are what guarantee lossless covers.
struct Rule {
    Pattern head;
    Pattern tail;

    bool empty_head() const { return head.empty(); }
    bool is_singleton() const { return head.empty() && tail.size() == 1; }
    std::size_t len() const { return head.size() + tail.size(); }
    bool operator==(const Rule&) const = default;
};

struct RuleHash {
    std::size_t operator()(const Rule& r) const noexcept {
        PatternHash ph;
        std::size_t h = ph(r.head);
        return h ^ (ph(r.tail) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
};

inline Rule singleton_rule(EventId e) { return Rule{{}, {e}}; }

// The model: a set of rules that always contains every singleton over the
// alphabet. Canonical order (used for serialization and all tie-breaking)
// is singletons in alphabet order followed by the non-singleton rules in
// insertion order.
class RuleSet {
public:
    explicit RuleSet(std::size_t alphabet_size);

    std::size_t alphabet_size() const { return alphabet_size_; }
    std::size_t size() const { return alphabet_size_ + extras_.size(); }
    std::size_t extra_count() const { return extras_.size(); }

    const Rule& at(std::size_t canonical_index) const;
    const std::vector<Rule>& extras() const { return extras_; }

    bool contains(const Rule& r) const;
    std::optional<std::size_t> index_of(const Rule& r) const;

    // Appends a non-singleton rule; returns false if already present
    // (adding a singleton is always a no-op since they are all present).
    bool add(const Rule& r);
    void pop_back();
    Rule erase_extra(std::size_t extra_index);
    void insert_extra(std::size_t extra_index, Rule r);

    bool operator==(const RuleSet&) const = default;

private:
    std::size_t alphabet_size_;
    std::vector<Rule> singles_;
    std::vector<Rule> extras_;
};

struct RuleStats {
    std::int64_t trigger_count = 0;
    std::int64_t support = 0;
    double confidence = 0.0;
};

struct SearchParams {
    // Budget ratios: a pattern window may carry at most max_gap * |pattern|
    // gap events, a tail may start at most max_delay * |tail| events after
    // its trigger.
    double max_gap = 2.0;
    double max_delay = 2.0;
    double alpha = 0.05;

    // How to pick the tail window for a trigger: fewest gaps (tie-broken by
    // delay) or simply the nearest qualifying window.
    enum class BestWindow { MinGaps, Nearest };
    BestWindow best_window = BestWindow::MinGaps;

    int pass_cap = 64;
};

// A minimal window [start,end] of some pattern: the pattern occurs in it but
// in no proper sub-window. `matched` holds the leftmost embedding, one
// position per pattern symbol; matched.front() == start, matched.back() == end.
struct MinWin {
    std::uint32_t start = 0;
    std::uint32_t end = 0;
    std::vector<std::uint32_t> matched;

    std::int64_t gap_count() const {
        return static_cast<std::int64_t>(end - start + 1) -
               static_cast<std::int64_t>(matched.size());
    }
};

inline bool gap_within_budget(std::int64_t gaps, std::size_t pattern_len, double max_gap) {
    return static_cast<double>(gaps) <= max_gap * static_cast<double>(pattern_len);
}

// All minimal windows of `pattern` in `seq`, left to right, whose gap count
// stays within max_gap * |pattern|. The pattern must be non-empty.
std::vector<MinWin> minimal_windows(const Pattern& pattern, const Sequence& seq,
                                    double max_gap);

// One placed rule instance: head window (absent for empty-head rules)
// followed by a tail window in the same sequence.
struct RuleWindow {
    std::int32_t seq = 0;
    const MinWin* head = nullptr;  // null for empty-head rules
    const MinWin* tail = nullptr;

    std::uint32_t k() const { return tail->start; }
    std::uint32_t l() const { return tail->end; }
    std::int64_t delay() const {
        return head ? static_cast<std::int64_t>(tail->start) - head->end - 1 : 0;
    }
    // What this window covers: exactly the matched tail positions.
    const std::vector<std::uint32_t>& covered() const { return tail->matched; }
};

// Read-only database index: per-event occurrence lists plus a memo of
// minimal windows per pattern. Every matching routine below goes through
// this so repeated lookups of the same pattern are free.
class DbIndex {
public:
    explicit DbIndex(const SequenceDatabase& db);

    const SequenceDatabase& db() const { return *db_; }
    std::size_t num_sequences() const { return db_->sequences.size(); }
    std::size_t alphabet_size() const { return db_->alphabet.size(); }
    std::int64_t total_events() const { return total_; }
    std::int64_t frequency(EventId e) const { return freq_[e]; }
    const std::vector<std::uint32_t>& positions(std::size_t seq, EventId e) const {
        return pos_[seq][e];
    }

    // Minimal windows of `pattern` in sequence `seq`, unfiltered by any gap
    // budget. Returned storage is stable for the index lifetime.
    const std::vector<MinWin>& minimal_all(std::size_t seq, const Pattern& pattern) const;

private:
    struct PatternEntry {
        std::vector<std::vector<MinWin>> per_seq;
    };
    const PatternEntry& entry(const Pattern& pattern) const;

    const SequenceDatabase* db_;
    std::int64_t total_ = 0;
    std::vector<std::int64_t> freq_;
    std::vector<std::vector<std::vector<std::uint32_t>>> pos_;  // [seq][event]
    mutable std::unordered_map<Pattern, PatternEntry, PatternHash> cache_;
};

// Number of triggers of `rule`: minimal windows of its head across the
// database, subject to the head gap budget. Requires a non-empty head.
std::int64_t trigger_count(const DbIndex& idx, const Rule& rule, const SearchParams& params);

// Best rule window per trigger: among minimal tail windows starting after
// the trigger within the delay and gap budgets, pick per params.best_window.
// Triggers without a qualifying tail contribute nothing. For empty-head
// rules, returns every minimal tail window within the gap budget.
std::vector<RuleWindow> best_rule_windows(const DbIndex& idx, const Rule& rule,
                                          const SearchParams& params);

// support = number of best rule windows; confidence = support / triggers.
// Empty-head rules have confidence 1 by convention (their support is the
// number of qualifying tail windows).
RuleStats rule_stats(const DbIndex& idx, const Rule& rule, const SearchParams& params);

// The nearest qualifying minimal tail window for the given trigger whose
// matched positions are all uncovered. `covered` maps position-1 to the
// owning window ordinal, -1 when free. Returns nullptr when the budgets
// are exhausted.
const MinWin* next_best_tail(const DbIndex& idx, const Rule& rule, std::size_t seq,
                             const MinWin& head, std::span<const std::int32_t> covered,
                             const SearchParams& params);

// Memo for per-rule statistics and best windows, shared by the cover
// construction and the miners. Keyed by rule value; entries are never
// invalidated (the database is immutable).
class RuleCache {
public:
    RuleCache(const DbIndex& idx, const SearchParams& params)
        : idx_(&idx), params_(params) {}

    const DbIndex& index() const { return *idx_; }
    const SearchParams& params() const { return params_; }

    const RuleStats& stats(const Rule& r);
    const std::vector<RuleWindow>& windows(const Rule& r);

private:
    struct Entry {
        RuleStats stats;
        std::vector<RuleWindow> windows;
        bool filled = false;
    };
    const DbIndex* idx_;
    SearchParams params_;
    std::unordered_map<Rule, Entry, RuleHash> entries_;
};

}  // namespace seqrules
