#include "seqrules/candgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seqrules {

std::vector<Slot> insertion_slots(const Rule& rule) {
    std::vector<Slot> out;
    for (std::int32_t h = 0; h <= static_cast<std::int32_t>(rule.head.size()); ++h)
        out.push_back({true, h});
    for (std::int32_t t = 0; t <= static_cast<std::int32_t>(rule.tail.size()); ++t)
        out.push_back({false, t});
    return out;
}

Rule insert_event(const Rule& rule, EventId e, const Slot& slot) {
    Rule r = rule;
    if (slot.in_head)
        r.head.insert(r.head.begin() + slot.index, e);
    else
        r.tail.insert(r.tail.begin() + slot.index, e);
    return r;
}

namespace {

std::int64_t lookaround(const SearchParams& params) {
    return static_cast<std::int64_t>(std::ceil(params.max_gap)) + 1;
}

void push_range(std::vector<std::uint32_t>& out, std::int64_t lo, std::int64_t hi,
                std::int64_t seq_len) {
    lo = std::max<std::int64_t>(lo, 1);
    hi = std::min<std::int64_t>(hi, seq_len);
    for (std::int64_t p = lo; p <= hi; ++p)
        out.push_back(static_cast<std::uint32_t>(p));
}

}  // namespace

std::vector<std::uint32_t> gap_region(const DbIndex& idx, const Rule& rule,
                                      const RuleWindow& win, const Slot& slot,
                                      const SearchParams& params) {
    const std::int64_t seq_len =
        static_cast<std::int64_t>(idx.db().sequences[static_cast<std::size_t>(win.seq)].size());
    const std::int64_t look = lookaround(params);
    std::vector<std::uint32_t> out;

    const std::size_t hlen = rule.head.size();
    const std::size_t tlen = rule.tail.size();
    const auto& tail_pos = win.tail->matched;

    if (slot.in_head) {
        const std::size_t h = static_cast<std::size_t>(slot.index);
        if (h == 0) {
            // Before the window; for empty-head rules this is where a head
            // would have to sit.
            const std::int64_t anchor = win.head ? win.head->start : win.k();
            push_range(out, anchor - look, anchor - 1, seq_len);
        } else if (h == hlen) {
            push_range(out, win.head->end + 1, win.k() - 1, seq_len);  // delay region
        } else {
            push_range(out, win.head->matched[h - 1] + 1, win.head->matched[h] - 1, seq_len);
        }
        return out;
    }

    const std::size_t t = static_cast<std::size_t>(slot.index);
    if (t == 0) {
        if (win.head)
            push_range(out, win.head->end + 1, win.k() - 1, seq_len);  // delay region
        else
            push_range(out, static_cast<std::int64_t>(win.k()) - look, win.k() - 1, seq_len);
    } else if (t == tlen) {
        push_range(out, win.l() + 1, win.l() + look, seq_len);
    } else {
        push_range(out, tail_pos[t - 1] + 1, tail_pos[t] - 1, seq_len);
    }
    return out;
}

double occurrence_probability(const DbIndex& idx, EventId e, std::int64_t region_length) {
    if (region_length < 0)
        throw std::invalid_argument("occurrence_probability: negative region length");
    const double total = static_cast<double>(idx.total_events());
    const double freq = static_cast<double>(idx.frequency(e));
    if (freq > total)
        throw std::invalid_argument("occurrence_probability: frequency exceeds total");
    const double rate = total == 0 ? 0.0 : freq / total;
    return 1.0 - std::pow(1.0 - rate, static_cast<double>(region_length));
}

SigResult significance_test_moments(std::int64_t count, std::int64_t n, double mean,
                                    double variance, double alpha) {
    SigResult res;
    if (n > 10) {
        if (variance <= 0.0) {
            res.significant = static_cast<double>(count) > mean;
            res.p_value = res.significant ? 0.0 : 1.0;
            return res;
        }
        const double z = (static_cast<double>(count) - 0.5 - mean) / std::sqrt(variance);
        res.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
        res.significant = res.p_value < alpha;
        return res;
    }
    res.significant = static_cast<double>(count) > mean + 1.0;
    res.p_value = res.significant ? 0.0 : 1.0;
    return res;
}

SigResult significance_test(std::int64_t count, std::span<const double> probs, double alpha) {
    if (probs.empty())
        throw std::invalid_argument("significance_test: no trials");
    if (count > static_cast<std::int64_t>(probs.size()))
        throw std::invalid_argument("significance_test: count exceeds trial count");
    double mean = 0.0, variance = 0.0;
    for (double p : probs) {
        mean += p;
        variance += p * (1.0 - p);
    }
    return significance_test_moments(count, static_cast<std::int64_t>(probs.size()), mean,
                                     variance, alpha);
}

std::vector<Candidate> cand_rules(RuleCache& cache, const Rule& rule,
                                  const SearchParams& params) {
    const DbIndex& idx = cache.index();
    const auto& windows = cache.windows(rule);
    std::vector<Candidate> out;
    if (windows.empty())
        return out;

    const std::size_t omega = idx.alphabet_size();
    std::vector<std::int64_t> count(omega, 0);
    std::vector<std::int32_t> last_seen(omega, -1);
    std::vector<EventId> touched;

    for (const Slot& slot : insertion_slots(rule)) {
        std::fill(count.begin(), count.end(), 0);
        std::fill(last_seen.begin(), last_seen.end(), -1);
        touched.clear();

        // Region lengths grouped for the moment computation; occurrence
        // counts gathered window by window.
        std::vector<std::pair<std::int64_t, std::int64_t>> len_groups;  // (length, #windows)
        std::vector<std::int64_t> len_count;
        for (std::size_t w = 0; w < windows.size(); ++w) {
            const auto region = gap_region(idx, rule, windows[w], slot, params);
            const std::int64_t rl = static_cast<std::int64_t>(region.size());
            if (static_cast<std::size_t>(rl) >= len_count.size())
                len_count.resize(static_cast<std::size_t>(rl) + 1, 0);
            ++len_count[static_cast<std::size_t>(rl)];
            const Sequence& seq = idx.db().sequences[static_cast<std::size_t>(windows[w].seq)];
            for (std::uint32_t p : region) {
                const EventId e = seq[p - 1];
                if (last_seen[e] != static_cast<std::int32_t>(w)) {
                    last_seen[e] = static_cast<std::int32_t>(w);
                    if (count[e]++ == 0)
                        touched.push_back(e);
                }
            }
        }
        for (std::size_t l = 0; l < len_count.size(); ++l)
            if (len_count[l] > 0)
                len_groups.emplace_back(static_cast<std::int64_t>(l), len_count[l]);

        std::sort(touched.begin(), touched.end());
        for (EventId e : touched) {
            double mean = 0.0, variance = 0.0;
            for (const auto& [len, cnt] : len_groups) {
                const double p = occurrence_probability(idx, e, len);
                mean += static_cast<double>(cnt) * p;
                variance += static_cast<double>(cnt) * p * (1.0 - p);
            }
            const SigResult sig = significance_test_moments(
                count[e], static_cast<std::int64_t>(windows.size()), mean, variance,
                params.alpha);
            if (sig.significant)
                out.push_back(Candidate{insert_event(rule, e, slot), rule, slot, e,
                                        sig.p_value});
        }
    }

    const std::size_t hlen = rule.head.size();
    std::stable_sort(out.begin(), out.end(), [&](const Candidate& a, const Candidate& b) {
        if (a.p_value != b.p_value)
            return a.p_value < b.p_value;
        if (slot_rank(a.slot, hlen) != slot_rank(b.slot, hlen))
            return slot_rank(a.slot, hlen) < slot_rank(b.slot, hlen);
        return a.inserted < b.inserted;
    });
    return out;
}

}  // namespace seqrules
