#include "seqrules/codec.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace seqrules {

double universal_int(std::int64_t n) {
    if (n < 1)
        throw std::invalid_argument("universal_int: n must be >= 1");
    static const double log2_c0 = std::log2(kUniversalC0);
    double bits = log2_c0;
    double x = std::log2(static_cast<double>(n));
    while (x > 0) {
        bits += x;
        x = std::log2(x);
    }
    return bits;
}

double prequential_length(std::span<const std::int32_t> stream, std::int64_t num_symbols) {
    if (stream.empty())
        return 0.0;
    if (num_symbols < 1)
        throw std::invalid_argument("prequential_length: num_symbols must be >= 1");
    std::vector<std::int64_t> usage(static_cast<std::size_t>(num_symbols), 0);
    double bits = 0.0;
    std::int64_t seen = 0;
    for (std::int32_t sym : stream) {
        if (sym < 0 || sym >= num_symbols)
            throw std::invalid_argument("prequential_length: symbol outside alphabet");
        const double p = (static_cast<double>(usage[static_cast<std::size_t>(sym)]) + 0.5) /
                         (static_cast<double>(seen) + static_cast<double>(num_symbols) * 0.5);
        bits -= std::log2(p);
        ++usage[static_cast<std::size_t>(sym)];
        ++seen;
    }
    return bits;
}

ModelCost model_length(const RuleSet& rules) {
    const double omega = static_cast<double>(rules.alphabet_size());
    // P: all distinct non-singleton heads and tails.
    std::vector<Pattern> pool;
    for (std::size_t r = 0; r < rules.size(); ++r) {
        const Rule& rule = rules.at(r);
        if (rule.head.size() >= 2)
            pool.push_back(rule.head);
        if (rule.tail.size() >= 2)
            pool.push_back(rule.tail);
    }
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

    ModelCost mc;
    mc.patterns = universal_int(static_cast<std::int64_t>(pool.size()) + 1);
    for (const Pattern& p : pool)
        mc.patterns += universal_int(static_cast<std::int64_t>(p.size())) +
                       static_cast<double>(p.size()) * std::log2(omega);
    const double choices = static_cast<double>(pool.size()) + omega;
    mc.rules = universal_int(static_cast<std::int64_t>(rules.size()) + 1) +
               static_cast<double>(rules.size()) * (std::log2(choices + 1) + std::log2(choices));
    mc.total = mc.patterns + mc.rules;
    return mc;
}

namespace {

// Incremental prequential accumulator for one adaptive code context.
class PreqPot {
public:
    explicit PreqPot(std::int64_t num_symbols) : usage_(num_symbols, 0) {}

    void feed(std::size_t symbol, double* bits) {
        const double p = (static_cast<double>(usage_[symbol]) + 0.5) /
                         (static_cast<double>(seen_) +
                          static_cast<double>(usage_.size()) * 0.5);
        *bits -= std::log2(p);
        ++usage_[symbol];
        ++seen_;
    }

private:
    std::vector<std::int64_t> usage_;
    std::int64_t seen_ = 0;
};

struct PendingHit {
    std::int32_t rule;
    const SelectedWindow* win;  // known tail placement (encoder side)
};

struct StartedTail {
    std::int32_t rule;
    const MinWin* tail;         // matched positions (encoder side)
    const Pattern* symbols;     // tail pattern (decoder side)
    std::uint32_t next;         // index of the next symbol to place
    std::uint32_t started_at;
};

std::uint64_t trig_key(std::int32_t rule, std::uint32_t end) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(rule)) << 32) | end;
}

}  // namespace

CodeStreams serialize_streams(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                              const SearchParams& params) {
    const auto& db = idx.db();

    // Exactness check: every position owned by exactly one window.
    std::vector<std::vector<std::int32_t>> owner(db.sequences.size());
    for (std::size_t s = 0; s < db.sequences.size(); ++s)
        owner[s].assign(db.sequences[s].size(), -1);
    for (std::size_t w = 0; w < cover.windows.size(); ++w) {
        const SelectedWindow& sw = cover.windows[w];
        auto& own = owner.at(static_cast<std::size_t>(sw.win.seq));
        for (std::uint32_t p : sw.win.covered()) {
            if (p < 1 || p > own.size() || own[p - 1] >= 0)
                throw std::invalid_argument("serialize_streams: cover is not exact");
            own[p - 1] = static_cast<std::int32_t>(w);
        }
    }
    for (const auto& own : owner)
        for (std::int32_t o : own)
            if (o < 0)
                throw std::invalid_argument("serialize_streams: cover leaves events uncovered");

    CodeStreams out;
    for (std::size_t s = 0; s < db.sequences.size(); ++s) {
        const std::size_t len = db.sequences[s].size();

        // Triggers by end position, in canonical rule order per position.
        std::vector<std::vector<std::pair<std::int32_t, const MinWin*>>> trig_at(len + 1);
        for (std::size_t r = 0; r < rules.size(); ++r) {
            const Rule& rule = rules.at(r);
            if (rule.empty_head())
                continue;
            for (const MinWin& h : idx.minimal_all(s, rule.head))
                if (gap_within_budget(h.gap_count(), rule.head.size(), params.max_gap))
                    trig_at[h.end].emplace_back(static_cast<std::int32_t>(r), &h);
        }

        // Cover windows of this sequence, split by kind.
        std::unordered_map<std::uint64_t, const SelectedWindow*> hit_at;  // (rule, trigger end)
        std::vector<const SelectedWindow*> sel_at(len + 1, nullptr);      // empty-head, by start
        std::size_t expected_hits = 0;
        for (const SelectedWindow& sw : cover.windows) {
            if (static_cast<std::size_t>(sw.win.seq) != s)
                continue;
            if (sw.win.head) {
                hit_at[trig_key(sw.rule_index, sw.win.head->end)] = &sw;
                ++expected_hits;
            } else {
                sel_at[sw.win.k()] = &sw;
            }
        }

        std::vector<PendingHit> pending;
        std::vector<StartedTail> started;
        std::size_t consumed_hits = 0;

        for (std::uint32_t p = 1; p <= len; ++p) {
            int writers = 0;

            // 1. Pending hits read one delay-stream code each.
            for (auto it = pending.begin(); it != pending.end();) {
                if (it->win->win.k() == p) {
                    out.delay.push_back({it->rule, DelayKind::Start});
                    ++writers;
                    if (it->win->win.tail->matched.size() > 1)
                        started.push_back({it->rule, it->win->win.tail, nullptr, 1, p});
                    it = pending.erase(it);
                } else {
                    out.delay.push_back({it->rule, DelayKind::Delay});
                    ++it;
                }
            }

            // 2. Started, incomplete tails read one gap-stream code each.
            for (auto it = started.begin(); it != started.end();) {
                if (it->started_at == p) { ++it; continue; }
                if (it->tail->matched[it->next] == p) {
                    out.gap.push_back({it->rule, GapKind::Fill});
                    ++writers;
                    if (++it->next == it->tail->matched.size()) {
                        it = started.erase(it);
                        continue;
                    }
                } else {
                    out.gap.push_back({it->rule, GapKind::Gap});
                }
                ++it;
            }

            // 3. Otherwise an empty-head window must start here.
            if (writers == 0) {
                const SelectedWindow* sw = sel_at[p];
                if (!sw)
                    throw std::invalid_argument(
                        "serialize_streams: position not written by any window");
                out.trigger.push_back({sw->rule_index, TrigKind::Select});
                if (sw->win.tail->matched.size() > 1)
                    started.push_back({sw->rule_index, sw->win.tail, nullptr, 1, p});
                writers = 1;
            } else if (writers > 1) {
                throw std::invalid_argument("serialize_streams: conflicting writers");
            }

            // 4. The symbol at p is fixed; emit hit/miss for triggers ending here.
            for (const auto& [r, h] : trig_at[p]) {
                auto it = hit_at.find(trig_key(r, p));
                if (it != hit_at.end()) {
                    out.trigger.push_back({r, TrigKind::Hit});
                    pending.push_back({r, it->second});
                    ++consumed_hits;
                } else {
                    out.trigger.push_back({r, TrigKind::Miss});
                }
            }
        }
        if (!pending.empty() || !started.empty() || consumed_hits != expected_hits)
            throw std::invalid_argument("serialize_streams: cover windows are inconsistent");
    }
    return out;
}

DataCost data_length(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                     const SearchParams& params) {
    const auto& db = idx.db();
    if (db.sequences.empty())
        throw std::invalid_argument("data_length: empty database");
    DataCost dc;
    dc.counts = universal_int(static_cast<std::int64_t>(db.sequences.size()));
    for (const Sequence& s : db.sequences) {
        if (s.empty())
            throw std::invalid_argument("data_length: empty sequence");
        dc.counts += universal_int(static_cast<std::int64_t>(s.size()));
    }

    const CodeStreams cs = serialize_streams(idx, rules, cover, params);

    // Each decision the decoder cannot infer gets its own adaptive context:
    // one selector pot choosing among the empty-head rules, and a binary pot
    // per rule for hit/miss, start/delay, and fill/gap. The rule a binary
    // code belongs to is implied by the decoding order, so mixing them into
    // one pot would bill redundant information.
    std::vector<std::int32_t> selector_id(rules.size(), -1);
    std::int64_t num_selectors = 0;
    for (std::size_t r = 0; r < rules.size(); ++r)
        if (rules.at(r).empty_head())
            selector_id[r] = static_cast<std::int32_t>(num_selectors++);

    PreqPot selector_pot(num_selectors);
    std::vector<PreqPot> hitmiss(rules.size(), PreqPot(2));
    std::vector<PreqPot> startdelay(rules.size(), PreqPot(2));
    std::vector<PreqPot> fillgap(rules.size(), PreqPot(2));

    for (const TrigCode& c : cs.trigger) {
        const auto r = static_cast<std::size_t>(c.rule);
        if (c.kind == TrigKind::Select)
            selector_pot.feed(static_cast<std::size_t>(selector_id[r]), &dc.trigger);
        else
            hitmiss[r].feed(c.kind == TrigKind::Hit ? 0 : 1, &dc.trigger);
    }
    for (const DelayCode& c : cs.delay)
        startdelay[static_cast<std::size_t>(c.rule)].feed(
            c.kind == DelayKind::Start ? 0 : 1, &dc.delay);
    for (const GapCode& c : cs.gap)
        fillgap[static_cast<std::size_t>(c.rule)].feed(c.kind == GapKind::Fill ? 0 : 1,
                                                       &dc.gap);

    dc.total = dc.counts + dc.trigger + dc.delay + dc.gap;
    return dc;
}

double total_score(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                   const SearchParams& params) {
    return model_length(rules).total + data_length(idx, rules, cover, params).total;
}

namespace {

[[noreturn]] void corrupt(const char* what) {
    throw std::runtime_error(std::string("corrupt stream: ") + what);
}

// Detects whether a minimal window of `head` (within the gap budget) ends at
// position p of the partially reconstructed sequence. Works backward from p
// to the latest possible start, then verifies minimality forward.
bool trigger_ends_at(const std::vector<std::vector<std::uint32_t>>& pos, const Pattern& head,
                     std::uint32_t p, double max_gap, std::uint32_t* start_out) {
    const std::size_t m = head.size();
    const double max_len = static_cast<double>(m) + max_gap * static_cast<double>(m);
    const auto& last_pos = pos[head[m - 1]];
    if (last_pos.empty() || last_pos.back() != p)
        return false;
    std::uint32_t bound = p + 1;
    for (std::size_t t = m; t-- > 0;) {
        const auto& v = pos[head[t]];
        auto it = std::lower_bound(v.begin(), v.end(), bound);
        if (it == v.begin())
            return false;
        bound = *(it - 1);
        if (static_cast<double>(p - bound + 1) > max_len)
            return false;  // any completion is over the gap budget
    }
    // Forward check: the earliest occurrence starting at `bound` must end at p.
    std::uint32_t cur = bound - 1;
    for (std::size_t t = 0; t < m; ++t) {
        const auto& v = pos[head[t]];
        auto it = std::upper_bound(v.begin(), v.end(), cur);
        if (it == v.end())
            return false;
        cur = *it;
    }
    if (cur != p)
        return false;
    if (!gap_within_budget(static_cast<std::int64_t>(p - bound + 1) -
                               static_cast<std::int64_t>(m),
                           m, max_gap))
        return false;
    *start_out = bound;
    return true;
}

}  // namespace

std::vector<Sequence> decode(const CodeStreams& streams, const RuleSet& rules,
                             const std::vector<std::size_t>& seq_lengths,
                             const SearchParams& params) {
    std::size_t it_t = 0, it_d = 0, it_g = 0;
    std::vector<Sequence> out;
    out.reserve(seq_lengths.size());

    // Non-empty-head rules in canonical order, for trigger detection.
    std::vector<std::int32_t> head_rules;
    for (std::size_t r = 0; r < rules.size(); ++r)
        if (!rules.at(r).empty_head())
            head_rules.push_back(static_cast<std::int32_t>(r));

    struct DecPending {
        std::int32_t rule;
    };

    for (std::size_t len : seq_lengths) {
        Sequence seq(len, 0);
        std::vector<std::vector<std::uint32_t>> pos(rules.alphabet_size());
        std::vector<DecPending> pending;
        std::vector<StartedTail> started;

        auto place = [&](std::uint32_t p, EventId e) {
            seq[p - 1] = e;
            pos[e].push_back(p);
        };

        for (std::uint32_t p = 1; p <= len; ++p) {
            int writers = 0;
            for (auto it = pending.begin(); it != pending.end();) {
                if (it_d >= streams.delay.size())
                    corrupt("delay stream exhausted");
                const DelayCode c = streams.delay[it_d++];
                if (c.rule != it->rule)
                    corrupt("delay code for unexpected rule");
                if (c.kind == DelayKind::Start) {
                    const Pattern& tail = rules.at(static_cast<std::size_t>(it->rule)).tail;
                    place(p, tail[0]);
                    ++writers;
                    if (tail.size() > 1)
                        started.push_back({it->rule, nullptr, &tail, 1, p});
                    it = pending.erase(it);
                } else {
                    ++it;
                }
            }
            for (auto it = started.begin(); it != started.end();) {
                if (it->started_at == p) { ++it; continue; }
                if (it_g >= streams.gap.size())
                    corrupt("gap stream exhausted");
                const GapCode c = streams.gap[it_g++];
                if (c.rule != it->rule)
                    corrupt("gap code for unexpected rule");
                if (c.kind == GapKind::Fill) {
                    place(p, (*it->symbols)[it->next]);
                    ++writers;
                    if (++it->next == it->symbols->size()) {
                        it = started.erase(it);
                        continue;
                    }
                }
                ++it;
            }
            if (writers == 0) {
                if (it_t >= streams.trigger.size())
                    corrupt("trigger stream exhausted");
                const TrigCode c = streams.trigger[it_t++];
                if (c.kind != TrigKind::Select)
                    corrupt("expected a selector code");
                const Rule& rule = rules.at(static_cast<std::size_t>(c.rule));
                if (!rule.empty_head())
                    corrupt("selector names a non-empty-head rule");
                place(p, rule.tail[0]);
                if (rule.tail.size() > 1)
                    started.push_back({c.rule, nullptr, &rule.tail, 1, p});
            } else if (writers > 1) {
                corrupt("two codes wrote the same position");
            }
            // Symbol fixed; consume hit/miss codes for triggers ending here.
            for (std::int32_t r : head_rules) {
                std::uint32_t start = 0;
                if (!trigger_ends_at(pos, rules.at(static_cast<std::size_t>(r)).head, p,
                                     params.max_gap, &start))
                    continue;
                if (it_t >= streams.trigger.size())
                    corrupt("trigger stream exhausted");
                const TrigCode c = streams.trigger[it_t++];
                if (c.rule != r || c.kind == TrigKind::Select)
                    corrupt("trigger code for unexpected rule");
                if (c.kind == TrigKind::Hit)
                    pending.push_back({r});
            }
        }
        if (!pending.empty() || !started.empty())
            corrupt("sequence ended with open rule instances");
        out.push_back(std::move(seq));
    }
    if (it_t != streams.trigger.size() || it_d != streams.delay.size() ||
        it_g != streams.gap.size())
        corrupt("trailing codes");
    return out;
}

}  // namespace seqrules
