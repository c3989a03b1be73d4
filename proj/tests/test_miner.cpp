#include <doctest.h>

#include <string>
#include <vector>

#include "helpers.hpp"
#include "seqrules/miner.hpp"

using namespace seqrules;
using testutil::db_from;

namespace {

SequenceDatabase repeated_ab(int copies) {
    std::string line;
    for (int i = 0; i < copies; ++i)
        line += (i ? " a b" : "a b");
    return db_from({line});
}

bool has_rule(const RuleSet& rules, const Rule& r) { return rules.contains(r); }

}  // namespace

TEST_CASE("split: worked examples") {
    const Pattern abc{0, 1, 2};
    const auto rules = split(abc);
    REQUIRE(rules.size() == 3);
    CHECK(rules[0] == Rule{{}, {0, 1, 2}});
    CHECK(rules[1] == Rule{{0}, {1, 2}});
    CHECK(rules[2] == Rule{{0, 1}, {2}});

    CHECK(split(Pattern{5}) == std::vector<Rule>{Rule{{}, {5}}});

    const auto four = split(Pattern{0, 1, 2, 3});
    CHECK(four.size() == 4);
    for (const Rule& r : four)
        CHECK(!r.tail.empty());

    CHECK_THROWS_AS(split(Pattern{}), std::invalid_argument);
}

TEST_CASE("significant gain threshold") {
    CHECK(significant_gain(100.0, 94.9, 0.05));
    CHECK_FALSE(significant_gain(100.0, 96.0, 0.05));
    CHECK_FALSE(significant_gain(42.0, 42.0, 0.05));
    CHECK(significant_gain(100.0, 95.0, 0.05));  // exactly 5 bits
    CHECK(significant_gain(100.0, 89.0, 0.1));   // ceil(log2(10)) = 4
}

TEST_CASE("prune removes unused and redundant rules") {
    SearchParams params;
    auto db = repeated_ab(24);
    db.alphabet.intern("q");
    db.alphabet.intern("r");
    DbIndex idx(db);
    RuleCache cache(idx, params);

    // Never-used rule: pure model overhead.
    RuleSet with_unused(db.alphabet.size());
    with_unused.add(Rule{{}, {2, 3}});  // q r never occurs
    RuleSet pruned = prune(idx, with_unused, cache, params);
    CHECK(pruned.extra_count() == 0);

    // Singleton-only model is untouched.
    RuleSet bare(db.alphabet.size());
    CHECK(prune(idx, bare, cache, params) == bare);

    // Of two rules explaining the same events, at most one survives and the
    // score cannot get worse.
    RuleSet both(db.alphabet.size());
    both.add(Rule{{}, {0, 1}});
    both.add(Rule{{0}, {1}});
    const double before = score_model(idx, both, cache, params).total;
    RuleSet after = prune(idx, both, cache, params);
    const double after_score = score_model(idx, after, cache, params).total;
    CHECK(after_score <= before);
    CHECK(after.extra_count() < 2);
}

TEST_CASE("mine: repeated pattern yields one rule, not two") {
    auto db = repeated_ab(24);
    SearchParams params;
    MineResult res = mine(db, params);

    const Rule eps_ab{{}, {0, 1}};
    const Rule a_b{{0}, {1}};
    CHECK((has_rule(res.rules, eps_ab) || has_rule(res.rules, a_b)));
    CHECK_FALSE((has_rule(res.rules, eps_ab) && has_rule(res.rules, a_b)));
    CHECK(res.final_score < res.null_score);
    CHECK(res.passes < params.pass_cap);  // converged, not capped

    // Monotone bookkeeping: additions and replacements clear the gain
    // threshold, prunes strictly improve, and the chain is consistent.
    double prev = res.null_score;
    for (const UpdateRecord& u : res.updates) {
        CHECK(u.before == doctest::Approx(prev));
        if (u.kind == UpdateKind::Prune)
            CHECK(u.after < u.before);
        else
            CHECK(u.before - u.after >= 5.0 - 1e-6);
        prev = u.after;
    }
    CHECK(res.final_score == doctest::Approx(prev));
}

TEST_CASE("mine is deterministic") {
    auto db = repeated_ab(18);
    SearchParams params;
    MineResult a = mine(db, params);
    MineResult b = mine(db, params);
    CHECK(a.rules == b.rules);
    CHECK(a.final_score == doctest::Approx(b.final_score));
    CHECK(a.candidates_tested == b.candidates_tested);
}

TEST_CASE("mine: conditional structure is picked up") {
    // x y is always planted; z w follows it 3 times out of 4.
    std::string line;
    for (int i = 0; i < 32; ++i) {
        line += "x y ";
        line += (i % 4 != 0) ? "z w " : "";
        line += "n" + std::to_string(i % 7) + " ";
    }
    auto db = db_from({line});
    SearchParams params;
    MineResult res = mine(db, params);
    CHECK(res.final_score < res.null_score);
    CHECK(res.rules.extra_count() >= 1);

    // Whatever the exact shape, the model must explain z/w conditionally or
    // as patterns; verify the score beats the naive pattern-only alternative.
    RuleSet naive(db.alphabet.size());
    naive.add(testutil::rule(db, "-", "x y"));
    DbIndex idx(db);
    RuleCache cache(idx, params);
    CHECK(res.final_score <= score_model(idx, naive, cache, params).total + 1e-6);
}

TEST_CASE("mine_from_patterns: worked cases") {
    SearchParams params;
    {
        auto db = repeated_ab(24);
        MineResult res = mine_from_patterns(db, {}, params);
        CHECK(res.rules.extra_count() == 0);
        CHECK(res.final_score == doctest::Approx(res.null_score));
    }
    {
        // Contiguous frequent pattern: its best split is accepted.
        auto db = repeated_ab(24);
        MineResult res = mine_from_patterns(db, {Pattern{0, 1}}, params);
        REQUIRE(res.rules.extra_count() == 1);
        CHECK(res.final_score < res.null_score);

        DbIndex idx(db);
        RuleCache cache(idx, params);
        for (const Rule& r : split(Pattern{0, 1})) {
            RuleSet with(db.alphabet.size());
            with.add(r);
            CHECK(res.final_score <=
                  score_model(idx, with, cache, params).total + 1e-9);
        }
    }
    {
        // The accepted rule is the best-scoring split of the pattern.
        std::string line;
        for (int i = 0; i < 40; ++i) {
            line += "x y ";
            line += (i % 4 != 0) ? "z w " : "";
            line += "n" + std::to_string(i % 5) + " ";
        }
        auto db = db_from({line});
        const Pattern xyzw = testutil::pat(db, "x y z w");
        MineResult res = mine_from_patterns(db, {xyzw}, params);
        CHECK(res.final_score < res.null_score);
        REQUIRE(res.rules.extra_count() == 1);

        DbIndex idx(db);
        RuleCache cache(idx, params);
        double best = 0;
        Rule best_rule;
        for (const Rule& r : split(xyzw)) {
            RuleSet with(db.alphabet.size());
            with.add(r);
            const double s = score_model(idx, with, cache, params).total;
            if (best == 0 || s < best) {
                best = s;
                best_rule = r;
            }
        }
        CHECK(res.rules.extras()[0] == best_rule);
        CHECK(res.final_score == doctest::Approx(best));
    }
}

TEST_CASE("mine_from_patterns never scores worse than the singleton model") {
    auto db = db_from({"p q r p q r p q r p q r s s"});
    SearchParams params;
    MineResult res = mine_from_patterns(
        db, {testutil::pat(db, "p q r"), testutil::pat(db, "s"), testutil::pat(db, "q r")},
        params);
    CHECK(res.final_score <= res.null_score + 1e-9);
}
