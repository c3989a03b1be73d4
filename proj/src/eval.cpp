#include "seqrules/eval.hpp"

#include <algorithm>

namespace seqrules {

std::int64_t lcs_distance(const Pattern& a, const Pattern& b) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::int64_t> prev(m + 1, 0), cur(m + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            if (a[i - 1] == b[j - 1])
                cur[j] = prev[j - 1] + 1;
            else
                cur[j] = std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    const std::int64_t lcs = prev[m];
    return static_cast<std::int64_t>(n + m) - 2 * lcs;
}

double pattern_sim(const Pattern& a, const Pattern& b) {
    if (a.empty() && b.empty())
        return 1.0;
    if (a.empty() || b.empty())
        return 0.0;
    return 1.0 - static_cast<double>(lcs_distance(a, b)) /
                     static_cast<double>(a.size() + b.size());
}

double rule_sim(const Rule& a, const Rule& b) {
    Pattern ca = a.head;
    ca.insert(ca.end(), a.tail.begin(), a.tail.end());
    Pattern cb = b.head;
    cb.insert(cb.end(), b.tail.begin(), b.tail.end());
    return 0.5 * pattern_sim(ca, cb) + 0.25 * pattern_sim(a.head, b.head) +
           0.25 * pattern_sim(a.tail, b.tail);
}

double recall(const std::vector<Rule>& truth, const std::vector<Rule>& mined) {
    if (truth.empty())
        return 0.0;
    double sum = 0.0;
    for (const Rule& t : truth) {
        double best = 0.0;
        for (const Rule& m : mined)
            best = std::max(best, rule_sim(t, m));
        sum += best;
    }
    return sum / static_cast<double>(truth.size());
}

double precision(const std::vector<Rule>& truth, const std::vector<Rule>& mined) {
    if (mined.empty())
        return 0.0;
    std::vector<double> best(mined.size(), 0.0);
    for (std::size_t i = 0; i < mined.size(); ++i)
        for (const Rule& t : truth)
            best[i] = std::max(best[i], rule_sim(t, mined[i]));
    // Keep the |T| largest per-mined similarities; ties resolved by the
    // mined rules' order.
    std::stable_sort(best.begin(), best.end(), std::greater<>());
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min(best.size(), truth.size()); ++i)
        sum += best[i];
    return sum / static_cast<double>(mined.size());
}

EvalReport evaluate(const std::vector<Rule>& truth, const std::vector<Rule>& mined,
                    bool exclude_singletons) {
    std::vector<Rule> m = mined;
    if (exclude_singletons)
        std::erase_if(m, [](const Rule& r) { return r.is_singleton(); });

    EvalReport rep;
    rep.recall = recall(truth, m);
    rep.precision = precision(truth, m);
    rep.f1 = (rep.recall + rep.precision) == 0.0
                 ? 0.0
                 : 2.0 * rep.precision * rep.recall / (rep.precision + rep.recall);
    for (const Rule& t : truth) {
        MatchEntry e;
        e.truth = t;
        for (const Rule& mm : m) {
            const double s = rule_sim(t, mm);
            if (s > e.sim) {
                e.sim = s;
                e.best_mined = mm;
            }
        }
        rep.matches.push_back(std::move(e));
    }
    return rep;
}

}  // namespace seqrules
