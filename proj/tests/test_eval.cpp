#include <doctest.h>

#include "seqrules/eval.hpp"
#include "seqrules/rng.hpp"

using namespace seqrules;

TEST_CASE("lcs distance") {
    CHECK(lcs_distance({0, 1, 2}, {0, 1, 2}) == 0);
    CHECK(lcs_distance({0, 1, 2}, {0, 2}) == 1);
    CHECK(lcs_distance({0, 1}, {2, 3}) == 4);
    CHECK(lcs_distance({}, {0, 1}) == 2);
}

TEST_CASE("lcs distance satisfies the triangle inequality") {
    Rng rng(31);
    for (int trial = 0; trial < 400; ++trial) {
        auto sample = [&] {
            Pattern p(static_cast<std::size_t>(rng.uniform_int(0, 6)));
            for (auto& e : p)
                e = static_cast<EventId>(rng.uniform_int(0, 3));
            return p;
        };
        const Pattern a = sample(), b = sample(), c = sample();
        CHECK(lcs_distance(a, c) <= lcs_distance(a, b) + lcs_distance(b, c));
    }
}

TEST_CASE("pattern similarity") {
    CHECK(pattern_sim({0, 1, 2}, {0, 1, 2}) == doctest::Approx(1.0));
    CHECK(pattern_sim({0, 1, 2}, {0, 2}) == doctest::Approx(0.8));
    CHECK(pattern_sim({}, {0, 1}) == doctest::Approx(0.0));
    CHECK(pattern_sim({}, {}) == doctest::Approx(1.0));
}

TEST_CASE("rule similarity") {
    const Rule ab_c{{0, 1}, {2}};
    CHECK(rule_sim(ab_c, ab_c) == doctest::Approx(1.0));

    const Rule a_bc{{0}, {1, 2}};
    CHECK(rule_sim(a_bc, ab_c) == doctest::Approx(0.5 + 0.25 * (2.0 / 3) + 0.25 * (2.0 / 3)));
    CHECK(rule_sim(a_bc, ab_c) == doctest::Approx(rule_sim(ab_c, a_bc)));

    const Rule eps_ab{{}, {0, 1}};
    CHECK(rule_sim(eps_ab, eps_ab) == doctest::Approx(1.0));

    // 1 only on exact head and tail match.
    const Rule eps_a{{}, {0}};
    CHECK(rule_sim(eps_ab, eps_a) < 1.0);
}

TEST_CASE("recall, precision, F1: worked examples") {
    const Rule a_b{{0}, {1}};
    const Rule c_d{{2}, {3}};

    CHECK(recall({a_b}, {a_b}) == doctest::Approx(1.0));
    CHECK(recall({a_b}, {}) == doctest::Approx(0.0));
    CHECK(recall({a_b}, {a_b, c_d}) == doctest::Approx(1.0));

    CHECK(precision({a_b}, {a_b}) == doctest::Approx(1.0));
    CHECK(precision({a_b}, {a_b, c_d}) == doctest::Approx(0.5));
    CHECK(precision({a_b}, {c_d}) == doctest::Approx(rule_sim(a_b, c_d)));

    EvalReport rep = evaluate({a_b}, {a_b, c_d});
    CHECK(rep.f1 == doctest::Approx(2.0 * 1.0 * 0.5 / 1.5));
    CHECK(evaluate({a_b}, {a_b}).f1 == doctest::Approx(1.0));
    CHECK(evaluate({a_b}, {}).f1 == doctest::Approx(0.0));
    REQUIRE(rep.matches.size() == 1);
    CHECK(rep.matches[0].best_mined == a_b);
    CHECK(rep.matches[0].sim == doctest::Approx(1.0));
}

TEST_CASE("singleton rules are excluded from the mined side by default") {
    const Rule a_b{{0}, {1}};
    const Rule s0{{}, {0}};
    const Rule s1{{}, {1}};
    CHECK(evaluate({a_b}, {s0, s1}).f1 == doctest::Approx(0.0));
    CHECK(evaluate({a_b}, {s0, s1}, false).f1 > 0.0);
    CHECK(evaluate({a_b}, {a_b, s0, s1}).f1 == doctest::Approx(1.0));
}
