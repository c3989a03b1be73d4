#include "seqrules/miner.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace seqrules {

namespace {
constexpr double kScoreEps = 1e-9;
}

Score score_model(const DbIndex& idx, const RuleSet& rules, RuleCache& cache,
                  const SearchParams& params) {
    Score s;
    const Cover cov = cover(idx, rules, cache, params);
    s.model = model_length(rules);
    s.data = data_length(idx, rules, cov, params);
    s.total = s.model.total + s.data.total;
    return s;
}

std::vector<Rule> split(const Pattern& pattern) {
    if (pattern.empty())
        throw std::invalid_argument("split: empty pattern");
    std::vector<Rule> out;
    out.reserve(pattern.size());
    for (std::size_t i = 0; i < pattern.size(); ++i)
        out.push_back(Rule{Pattern(pattern.begin(), pattern.begin() + static_cast<std::ptrdiff_t>(i)),
                           Pattern(pattern.begin() + static_cast<std::ptrdiff_t>(i), pattern.end())});
    return out;
}

bool significant_gain(double old_bits, double new_bits, double alpha) {
    const double threshold = std::ceil(std::log2(1.0 / alpha));
    return old_bits - new_bits >= threshold - kScoreEps;
}

namespace {

std::string rule_str(const Rule& r) {
    std::string s;
    if (r.head.empty())
        s = "-";
    else
        for (std::size_t i = 0; i < r.head.size(); ++i)
            s += (i ? "." : "") + std::to_string(r.head[i]);
    s += " -> ";
    for (std::size_t i = 0; i < r.tail.size(); ++i)
        s += (i ? "." : "") + std::to_string(r.tail[i]);
    return s;
}

// Pattern/choice bits one rule is responsible for in L(R); used only to
// order the prune pass.
double encoded_size(const Rule& r, std::size_t pool_size, std::size_t omega) {
    double bits = 0;
    const double lo = std::log2(static_cast<double>(omega));
    if (r.head.size() >= 2)
        bits += universal_int(static_cast<std::int64_t>(r.head.size())) +
                static_cast<double>(r.head.size()) * lo;
    if (r.tail.size() >= 2)
        bits += universal_int(static_cast<std::int64_t>(r.tail.size())) +
                static_cast<double>(r.tail.size()) * lo;
    const double choices = static_cast<double>(pool_size + omega);
    bits += std::log2(choices + 1) + std::log2(choices);
    return bits;
}

std::size_t pattern_pool_size(const RuleSet& rules) {
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
    return pool.size();
}

// Shared mutable search state. Score and cover always describe `rules`.
struct SearchState {
    const DbIndex& idx;
    RuleCache& cache;
    const SearchParams& params;
    RuleSet rules;
    Cover cov;
    double score;
    std::uint64_t version = 1;  // bumped on every accepted model change
    std::vector<UpdateRecord> updates;
    std::ostream* trace = nullptr;

    SearchState(const DbIndex& i, RuleCache& c, const SearchParams& p, RuleSet r)
        : idx(i), cache(c), params(p), rules(std::move(r)),
          cov(cover(idx, rules, cache, params)),
          score(model_length(rules).total + data_length(idx, rules, cov, params).total) {}

    double eval() {
        Cover candidate_cover = cover(idx, rules, cache, params);
        const double s = model_length(rules).total +
                         data_length(idx, rules, candidate_cover, params).total;
        scratch_cover_ = std::move(candidate_cover);
        return s;
    }

    void commit(UpdateKind kind, std::optional<Rule> added, std::optional<Rule> removed,
                double new_score) {
        updates.push_back({kind, added, removed, score, new_score});
        if (trace) {
            *trace << (kind == UpdateKind::Add ? "add"
                       : kind == UpdateKind::Replace ? "replace" : "prune")
                   << (added ? " " + rule_str(*added) : std::string())
                   << (removed ? " (drops " + rule_str(*removed) + ")" : std::string())
                   << "  " << score << " -> " << new_score << " bits\n";
        }
        score = new_score;
        cov = std::move(scratch_cover_);
        ++version;
    }

private:
    Cover scratch_cover_;
};

// One prune pass; order is frozen on entry against the current cover.
void prune_pass(SearchState& st, std::unordered_set<Rule, RuleHash>* banned) {
    struct Entry {
        std::size_t extra_index;
        std::int64_t usage;
        double size;
        std::size_t tail_len;
    };
    const std::size_t omega = st.rules.alphabet_size();
    const std::size_t pool = pattern_pool_size(st.rules);
    std::vector<Entry> order;
    for (std::size_t x = 0; x < st.rules.extra_count(); ++x) {
        const std::size_t canon = omega + x;
        const Rule& r = st.rules.at(canon);
        order.push_back({x, st.cov.usage[canon], encoded_size(r, pool, omega), r.tail.size()});
    }
    std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
        if (a.usage != b.usage)
            return a.usage < b.usage;
        if (a.size != b.size)
            return a.size > b.size;
        if (a.tail_len != b.tail_len)
            return a.tail_len < b.tail_len;
        return a.extra_index < b.extra_index;
    });

    // Indices shift as rules are removed; resolve by value.
    std::vector<Rule> victims;
    for (const Entry& e : order)
        victims.push_back(st.rules.at(omega + e.extra_index));

    for (const Rule& r : victims) {
        auto idx_of = st.rules.index_of(r);
        if (!idx_of)
            continue;
        const std::size_t extra_index = *idx_of - omega;
        Rule removed = st.rules.erase_extra(extra_index);
        const double s = st.eval();
        if (s < st.score - kScoreEps) {
            st.commit(UpdateKind::Prune, std::nullopt, removed, s);
            if (banned)
                banned->insert(removed);
        } else {
            st.rules.insert_extra(extra_index, std::move(removed));
        }
    }
}

std::vector<Rule> extend_order(SearchState& st) {
    struct Keyed {
        Rule rule;
        RuleStats stats;
        std::size_t canon;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(st.rules.size());
    for (std::size_t r = 0; r < st.rules.size(); ++r) {
        const Rule& rule = st.rules.at(r);
        keyed.push_back({rule, st.cache.stats(rule), r});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        if (a.stats.support != b.stats.support)
            return a.stats.support > b.stats.support;
        if (a.stats.confidence != b.stats.confidence)
            return a.stats.confidence > b.stats.confidence;
        if (a.rule.tail.size() != b.rule.tail.size())
            return a.rule.tail.size() > b.rule.tail.size();
        if (a.rule.head.size() != b.rule.head.size())
            return a.rule.head.size() > b.rule.head.size();
        return a.canon < b.canon;
    });
    std::vector<Rule> out;
    out.reserve(keyed.size());
    for (auto& k : keyed)
        out.push_back(std::move(k.rule));
    return out;
}

}  // namespace

RuleSet prune(const DbIndex& idx, RuleSet rules, RuleCache& cache, const SearchParams& params) {
    SearchState st(idx, cache, params, std::move(rules));
    prune_pass(st, nullptr);
    return std::move(st.rules);
}

MineResult mine(const SequenceDatabase& db, const SearchParams& params, std::ostream* trace,
                std::ostream* dump_candidates) {
    if (db.sequences.empty())
        throw std::invalid_argument("empty database");
    DbIndex idx(db);
    RuleCache cache(idx, params);
    SearchState st(idx, cache, params, RuleSet(db.alphabet.size()));
    st.trace = trace;
    const double null_score = st.score;

    // Candidate lists are generated once per rule; a rejected test is not
    // repeated until the model has actually changed.
    struct CachedCandidate {
        Candidate cand;
        std::uint64_t add_version = 0;
        std::uint64_t repl_version = 0;
    };
    std::unordered_map<Rule, std::vector<CachedCandidate>, RuleHash> cand_cache;
    std::unordered_set<Rule, RuleHash> banned;

    std::int64_t tested = 0;
    int pass = 0;
    bool updated = true;
    while (updated && pass < params.pass_cap) {
        updated = false;
        ++pass;
        for (const Rule& r : extend_order(st)) {
            if (!st.rules.contains(r))
                continue;  // removed earlier in this pass
            auto cc = cand_cache.find(r);
            if (cc == cand_cache.end()) {
                std::vector<CachedCandidate> list;
                for (Candidate& c : cand_rules(cache, r, params)) {
                    if (dump_candidates)
                        *dump_candidates << "cand " << rule_str(c.rule) << "  (from "
                                         << rule_str(r) << ")  p=" << c.p_value << "\n";
                    list.push_back({std::move(c), 0, 0});
                }
                cc = cand_cache.emplace(r, std::move(list)).first;
            }
            for (CachedCandidate& entry : cc->second) {
                const Rule& cand = entry.cand.rule;
                if (banned.contains(cand))
                    continue;
                bool accepted = false;
                if (!st.rules.contains(cand) && entry.add_version != st.version) {
                    entry.add_version = st.version;
                    ++tested;
                    st.rules.add(cand);
                    const double s = st.eval();
                    if (significant_gain(st.score, s, params.alpha)) {
                        st.commit(UpdateKind::Add, cand, std::nullopt, s);
                        accepted = true;
                    } else {
                        st.rules.pop_back();
                    }
                }
                if (!accepted && !r.is_singleton() && st.rules.contains(r) && cand != r &&
                    entry.repl_version != st.version) {
                    entry.repl_version = st.version;
                    ++tested;
                    const std::size_t pos = *st.rules.index_of(r) - st.rules.alphabet_size();
                    Rule parent = st.rules.erase_extra(pos);
                    const bool added = st.rules.add(cand);
                    const double s = st.eval();
                    if (significant_gain(st.score, s, params.alpha)) {
                        st.commit(UpdateKind::Replace, cand, parent, s);
                        accepted = true;
                    } else {
                        if (added)
                            st.rules.pop_back();
                        st.rules.insert_extra(pos, std::move(parent));
                    }
                }
                if (accepted) {
                    prune_pass(st, &banned);
                    updated = true;
                    break;  // continue with the next rule in extend order
                }
            }
        }
    }

    MineResult res{std::move(st.rules), std::move(st.cov), st.score, null_score,
                   pass, tested, std::move(st.updates)};
    return res;
}

MineResult mine_from_patterns(const SequenceDatabase& db, const std::vector<Pattern>& patterns,
                              const SearchParams& params, std::ostream* trace) {
    if (db.sequences.empty())
        throw std::invalid_argument("empty database");
    DbIndex idx(db);
    RuleCache cache(idx, params);
    SearchState st(idx, cache, params, RuleSet(db.alphabet.size()));
    st.trace = trace;
    const double null_score = st.score;
    std::int64_t tested = 0;

    // Order patterns by their contribution to compression: score the pattern
    // set as a model of empty-head rules and charge each pattern its absence.
    std::vector<double> contribution(patterns.size(), 0.0);
    {
        SearchState full(idx, cache, params, RuleSet(db.alphabet.size()));
        for (const Pattern& p : patterns) {
            if (p.empty())
                throw std::invalid_argument("empty pattern");
            full.rules.add(Rule{{}, p});
        }
        const double base = full.eval();
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            if (patterns[i].size() < 2)
                continue;  // singleton patterns add nothing to the model
            const Rule as_rule{{}, patterns[i]};
            auto pos = full.rules.index_of(as_rule);
            if (!pos) {
                contribution[i] = 0.0;
                continue;
            }
            const std::size_t extra = *pos - full.rules.alphabet_size();
            Rule removed = full.rules.erase_extra(extra);
            contribution[i] = full.eval() - base;
            full.rules.insert_extra(extra, std::move(removed));
        }
    }
    std::vector<std::size_t> order(patterns.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return contribution[a] > contribution[b];
    });

    for (std::size_t pi : order) {
        const Pattern& p = patterns[pi];
        double best_score = 0;
        std::optional<Rule> best;
        for (const Rule& r : split(p)) {
            if (st.rules.contains(r))
                continue;
            ++tested;
            st.rules.add(r);
            const double s = st.eval();
            st.rules.pop_back();
            if (!best || s < best_score - kScoreEps) {
                best = r;
                best_score = s;
            }
        }
        if (best && best_score < st.score - kScoreEps) {
            st.rules.add(*best);
            const double s = st.eval();
            st.commit(UpdateKind::Add, *best, std::nullopt, s);
        }
    }

    MineResult res{std::move(st.rules), std::move(st.cov), st.score, null_score,
                   1, tested, std::move(st.updates)};
    return res;
}

}  // namespace seqrules
