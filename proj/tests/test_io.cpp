#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "seqrules/io.hpp"

using namespace seqrules;
using testutil::db_from;

TEST_CASE("database files: parse and round trip") {
    std::istringstream in("# a comment\na b c\n\nb b\n");
    SequenceDatabase db = parse_database(in, "test.db");
    REQUIRE(db.sequences.size() == 2);
    CHECK(db.sequences[0] == Sequence{0, 1, 2});
    CHECK(db.sequences[1] == Sequence{1, 1});
    CHECK(db.alphabet.size() == 3);

    std::ostringstream out;
    write_database(out, db);
    std::istringstream back(out.str());
    SequenceDatabase again = parse_database(back, "again.db");
    CHECK(again.sequences == db.sequences);
    CHECK(again.alphabet.tokens() == db.alphabet.tokens());
}

TEST_CASE("database files: empty input is an error") {
    std::istringstream in("# nothing but comments\n\n");
    CHECK_THROWS_WITH_AS(parse_database(in, "x.db"), "empty database: x.db",
                         std::runtime_error);
}

TEST_CASE("model files: round trip with stats and footer") {
    auto db = db_from({"a b c d"});
    RuleSet rules(db.alphabet.size());
    rules.add(testutil::rule(db, "a b", "c d"));
    rules.add(testutil::rule(db, "-", "a b"));

    std::vector<ModelEntryStats> stats{{2, 0.5, 1}, {3, 1.0, 3}};
    ModelFooter footer{10.0, 20.0, 30.0, 40.0};
    std::ostringstream out;
    write_model(out, db.alphabet, rules, &stats, &footer);

    std::istringstream in(out.str());
    ModelDoc doc = parse_model(in, "m.model");
    CHECK(doc.alphabet == db.alphabet.tokens());
    REQUIRE(doc.entries.size() == 2);
    CHECK(doc.entries[0].head == std::vector<std::string>{"a", "b"});
    CHECK(doc.entries[1].head.empty());
    REQUIRE(doc.entries[0].stats.has_value());
    CHECK(doc.entries[0].stats->supp == 2);
    CHECK(doc.entries[0].stats->conf == doctest::Approx(0.5));
    CHECK(doc.entries[1].stats->usage == 3);

    const RuleSet parsed = doc_to_rules(doc, db.alphabet);
    CHECK(parsed == rules);
}

TEST_CASE("model files: bare rule lines (ground-truth format)") {
    std::istringstream in("a b -> c\n- -> x y\n");
    ModelDoc doc = parse_model(in, "t.truth");
    REQUIRE(doc.entries.size() == 2);
    CHECK(doc.entries[0].head == std::vector<std::string>{"a", "b"});
    CHECK(doc.entries[0].tail == std::vector<std::string>{"c"});
    CHECK(doc.entries[1].head.empty());
    CHECK_FALSE(doc.entries[0].stats.has_value());

    Alphabet shared;
    const auto rules = doc_rules_interning(doc, shared);
    REQUIRE(rules.size() == 2);
    CHECK(rules[1].head.empty());
    CHECK(rules[1].tail.size() == 2);
}

TEST_CASE("model files: errors carry line numbers") {
    {
        std::istringstream in("rule: a b c\n");  // no arrow
        CHECK_THROWS_WITH_AS(parse_model(in, "bad.model"),
                             "bad.model:1: rule line without '->'", std::runtime_error);
    }
    {
        std::istringstream in("alphabet: a\nrule: a -> b [supp=1\n");
        CHECK_THROWS_AS(parse_model(in, "bad.model"), std::runtime_error);
    }
    {
        std::istringstream in("gibberish line\n");
        CHECK_THROWS_AS(parse_model(in, "bad.model"), std::runtime_error);
    }
    {
        std::istringstream in("a -> \n");  // empty tail
        CHECK_THROWS_AS(parse_model(in, "bad.model"), std::runtime_error);
    }
}

TEST_CASE("unknown tokens are rejected when mapping onto a fixed alphabet") {
    auto db = db_from({"a b"});
    std::istringstream in("z -> a\n");
    ModelDoc doc = parse_model(in, "m.model");
    CHECK_THROWS_AS(doc_to_rules(doc, db.alphabet), std::runtime_error);
}

TEST_CASE("pattern files") {
    std::istringstream in("# patterns\na b c\nx\n");
    const auto pats = parse_patterns(in, "p.txt");
    REQUIRE(pats.size() == 2);
    CHECK(pats[0] == std::vector<std::string>{"a", "b", "c"});
    CHECK(pats[1] == std::vector<std::string>{"x"});
}
