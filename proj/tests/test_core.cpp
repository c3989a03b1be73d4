#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "oracles.hpp"
#include "seqrules/core.hpp"
#include "seqrules/rng.hpp"

using namespace seqrules;
using testutil::db_from;
using testutil::pat;

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> spans(const std::vector<MinWin>& wins) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const MinWin& w : wins)
        out.emplace_back(w.start, w.end);
    return out;
}

SequenceDatabase random_db(Rng& rng, std::int64_t max_len, std::int64_t omega) {
    std::vector<std::string> tokens;
    const std::int64_t len = rng.uniform_int(1, max_len);
    std::string line;
    for (std::int64_t i = 0; i < len; ++i)
        line += std::string(i ? " " : "") + static_cast<char>('a' + rng.uniform_int(0, omega - 1));
    // Force the whole alphabet into the token map so patterns can reference
    // any symbol even if a short sequence misses some.
    SequenceDatabase db = db_from({line});
    for (std::int64_t e = 0; e < omega; ++e)
        db.alphabet.intern(std::string(1, static_cast<char>('a' + e)));
    return db;
}

Pattern random_pattern(Rng& rng, std::int64_t max_len, std::int64_t omega) {
    Pattern p(static_cast<std::size_t>(rng.uniform_int(1, max_len)));
    for (auto& e : p)
        e = static_cast<EventId>(rng.uniform_int(0, omega - 1));
    return p;
}

}  // namespace

TEST_CASE("minimal windows: worked examples") {
    auto db = db_from({"a b a b"});
    auto wins = minimal_windows(pat(db, "a b"), db.sequences[0], 2.0);
    CHECK(spans(wins) == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 2}, {3, 4}});

    auto db2 = db_from({"a"});
    CHECK(spans(minimal_windows(pat(db2, "a"), db2.sequences[0], 2.0)) ==
          std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 1}});

    auto db3 = db_from({"a c b b"});
    CHECK(spans(minimal_windows(pat(db3, "a b"), db3.sequences[0], 2.0)) ==
          std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 3}});
}

TEST_CASE("minimal windows: matched positions are a leftmost embedding") {
    auto db = db_from({"a x b a b"});
    auto wins = minimal_windows(pat(db, "a b"), db.sequences[0], 2.0);
    REQUIRE(wins.size() == 2);
    CHECK(wins[0].matched == std::vector<std::uint32_t>{1, 3});
    CHECK(wins[1].matched == std::vector<std::uint32_t>{4, 5});
}

TEST_CASE("minimal windows: empty pattern is a usage error") {
    auto db = db_from({"a"});
    CHECK_THROWS_AS(minimal_windows(Pattern{}, db.sequences[0], 2.0), std::invalid_argument);
}

TEST_CASE("minimal windows agree with the brute-force oracle") {
    Rng rng(20250810);
    for (int trial = 0; trial < 300; ++trial) {
        SequenceDatabase db = random_db(rng, 30, 5);
        Pattern p = random_pattern(rng, 4, 5);
        const double max_gap = rng.uniform_int(0, 3);
        auto got = minimal_windows(p, db.sequences[0], max_gap);
        auto want = oracle::minimal_windows(db.sequences[0], p, max_gap);
        REQUIRE(spans(got) == want);
        for (const MinWin& w : got) {
            REQUIRE(w.matched.size() == p.size());
            REQUIRE(w.matched.front() == w.start);
            REQUIRE(w.matched.back() == w.end);
            for (std::size_t t = 0; t < p.size(); ++t)
                REQUIRE(db.sequences[0][w.matched[t] - 1] == p[t]);
            REQUIRE(std::is_sorted(w.matched.begin(), w.matched.end()));
        }
    }
}

TEST_CASE("trigger count: worked examples") {
    SearchParams params;
    {
        auto db = db_from({"a b c d a b e"});
        DbIndex idx(db);
        CHECK(trigger_count(idx, testutil::rule(db, "a b", "c d"), params) == 2);
    }
    {
        auto db = db_from({"c d c d"});
        db.alphabet.intern("a");
        db.alphabet.intern("b");
        DbIndex idx(db);
        CHECK(trigger_count(idx, testutil::rule(db, "a b", "c d"), params) == 0);
    }
    {
        auto db = db_from({"a b", "a b"});
        db.alphabet.intern("c");
        db.alphabet.intern("d");
        DbIndex idx(db);
        CHECK(trigger_count(idx, testutil::rule(db, "a b", "c d"), params) == 2);
    }
}

TEST_CASE("trigger count rejects empty heads") {
    auto db = db_from({"a"});
    DbIndex idx(db);
    CHECK_THROWS_AS(trigger_count(idx, testutil::rule(db, "-", "a"), SearchParams{}),
                    std::invalid_argument);
}

TEST_CASE("rule stats: worked examples") {
    SearchParams params;
    {
        auto db = db_from({"a b c d a b e"});
        DbIndex idx(db);
        const RuleStats st = rule_stats(idx, testutil::rule(db, "a b", "c d"), params);
        CHECK(st.support == 1);
        CHECK(st.confidence == doctest::Approx(0.5));
    }
    {
        auto db = db_from({"a a a"});
        DbIndex idx(db);
        const RuleStats st = rule_stats(idx, testutil::rule(db, "-", "a"), params);
        CHECK(st.support == 3);
        CHECK(st.confidence == doctest::Approx(1.0));
    }
    {
        auto db = db_from({"a b"});
        db.alphabet.intern("c");
        db.alphabet.intern("d");
        DbIndex idx(db);
        const RuleStats st = rule_stats(idx, testutil::rule(db, "a b", "c d"), params);
        CHECK(st.support == 0);
        CHECK(st.confidence == doctest::Approx(0.0));
    }
}

TEST_CASE("best rule windows: tail choice") {
    SearchParams params;
    auto db = db_from({"a x c y d c d b"});
    (void)db;  // layout reference only

    // Fewest gaps wins over nearest when the modes differ.
    auto db1 = db_from({"a b x c y d c d"});
    DbIndex idx1(db1);
    const Rule r1 = testutil::rule(db1, "a b", "c d");
    auto wins = best_rule_windows(idx1, r1, params);
    REQUIRE(wins.size() == 1);
    CHECK(wins[0].k() == 7);
    CHECK(wins[0].l() == 8);

    SearchParams nearest = params;
    nearest.best_window = SearchParams::BestWindow::Nearest;
    wins = best_rule_windows(idx1, r1, nearest);
    REQUIRE(wins.size() == 1);
    CHECK(wins[0].k() == 4);
    CHECK(wins[0].l() == 6);

    // Immediate adjacent tail.
    auto db2 = db_from({"a b c d"});
    DbIndex idx2(db2);
    wins = best_rule_windows(idx2, testutil::rule(db2, "a b", "c d"), params);
    REQUIRE(wins.size() == 1);
    CHECK(wins[0].k() == 3);
    CHECK(wins[0].delay() == 0);

    // Delay budget exceeded: 5 > 2 * |cd|.
    auto db3 = db_from({"a b x x x x x c d"});
    DbIndex idx3(db3);
    CHECK(best_rule_windows(idx3, testutil::rule(db3, "a b", "c d"), params).empty());
}

TEST_CASE("best rule windows: empty-head rules list every qualifying tail window") {
    auto db = db_from({"c d x c d"});
    DbIndex idx(db);
    auto wins = best_rule_windows(idx, testutil::rule(db, "-", "c d"), SearchParams{});
    REQUIRE(wins.size() == 2);
    CHECK(wins[0].k() == 1);
    CHECK(wins[1].k() == 4);
}

TEST_CASE("next best tail skips covered windows") {
    SearchParams params;
    auto db = db_from({"a b c d c d"});
    DbIndex idx(db);
    const Rule r = testutil::rule(db, "a b", "c d");
    auto wins = best_rule_windows(idx, r, params);
    REQUIRE(wins.size() == 1);

    std::vector<std::int32_t> covered(6, -1);
    covered[2] = covered[3] = 0;  // positions 3, 4
    const MinWin* next = next_best_tail(idx, r, 0, *wins[0].head, covered, params);
    REQUIRE(next != nullptr);
    CHECK(next->start == 5);
    CHECK(next->end == 6);

    covered[4] = covered[5] = 0;
    CHECK(next_best_tail(idx, r, 0, *wins[0].head, covered, params) == nullptr);

    std::vector<std::int32_t> free(6, -1);
    const MinWin* unchanged = next_best_tail(idx, r, 0, *wins[0].head, free, params);
    REQUIRE(unchanged != nullptr);
    CHECK(unchanged->start == 3);
}

TEST_CASE("stats agree with brute-force oracles on random instances") {
    Rng rng(7);
    SearchParams params;
    for (int trial = 0; trial < 200; ++trial) {
        SequenceDatabase db = random_db(rng, 30, 5);
        DbIndex idx(db);
        Rule r;
        if (rng.bernoulli(0.3)) {
            r.tail = random_pattern(rng, 4, 5);
        } else {
            r.head = random_pattern(rng, 3, 5);
            r.tail = random_pattern(rng, 3, 5);
        }
        const RuleStats st = rule_stats(idx, r, params);
        CHECK(st.support == oracle::support(db, r, params));
        if (!r.empty_head()) {
            CHECK(st.trigger_count == oracle::trigger_count(db, r, params));
            if (st.trigger_count > 0)
                CHECK(st.confidence ==
                      doctest::Approx(static_cast<double>(st.support) /
                                      static_cast<double>(st.trigger_count)));
        }
        // Budget compliance of every reported window.
        for (const RuleWindow& w : best_rule_windows(idx, r, params)) {
            CHECK(gap_within_budget(w.tail->gap_count(), r.tail.size(), params.max_gap));
            CHECK(w.delay() >= 0);
            CHECK(static_cast<double>(w.delay()) <=
                  params.max_delay * static_cast<double>(r.tail.size()));
            if (w.head) {
                CHECK(gap_within_budget(w.head->gap_count(), r.head.size(), params.max_gap));
                CHECK(w.head->end < w.k());
            }
        }
    }
}

TEST_CASE("operations are deterministic") {
    Rng rng(99);
    SequenceDatabase db = random_db(rng, 30, 5);
    DbIndex idx(db);
    const Rule r = Rule{{0}, {1, 2}};
    auto a = best_rule_windows(idx, r, SearchParams{});
    auto b = best_rule_windows(idx, r, SearchParams{});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].k() == b[i].k());
        CHECK(a[i].l() == b[i].l());
    }
}

TEST_CASE("rule set: canonical order and mutation") {
    RuleSet rules(3);
    CHECK(rules.size() == 3);
    CHECK(rules.at(1) == singleton_rule(1));
    CHECK(rules.contains(singleton_rule(2)));
    CHECK_FALSE(rules.add(singleton_rule(0)));  // singletons are implicit

    const Rule r1{{0}, {1, 2}};
    const Rule r2{{}, {1, 2}};
    CHECK(rules.add(r1));
    CHECK(rules.add(r2));
    CHECK_FALSE(rules.add(r1));
    CHECK(rules.size() == 5);
    CHECK(rules.at(3) == r1);
    CHECK(*rules.index_of(r2) == 4);

    Rule out = rules.erase_extra(0);
    CHECK(out == r1);
    CHECK(rules.at(3) == r2);
    rules.insert_extra(0, out);
    CHECK(rules.at(3) == r1);

    CHECK_THROWS_AS(rules.add(Rule{{0}, {7}}), std::invalid_argument);
}
