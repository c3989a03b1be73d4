#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqrules/core.hpp"

// Small fixture builders shared by the test suites.

namespace testutil {

inline seqrules::SequenceDatabase db_from(const std::vector<std::string>& lines) {
    seqrules::SequenceDatabase db;
    for (const std::string& line : lines) {
        seqrules::Sequence seq;
        std::istringstream is(line);
        std::string tok;
        while (is >> tok)
            seq.push_back(db.alphabet.intern(tok));
        db.sequences.push_back(std::move(seq));
    }
    return db;
}

inline seqrules::Pattern pat(const seqrules::SequenceDatabase& db, const std::string& text) {
    seqrules::Pattern p;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        auto id = db.alphabet.find(tok);
        if (!id)
            throw std::runtime_error("fixture token not in alphabet: " + tok);
        p.push_back(*id);
    }
    return p;
}

// head may be "" or "-" for empty-head rules.
inline seqrules::Rule rule(const seqrules::SequenceDatabase& db, const std::string& head,
                           const std::string& tail) {
    seqrules::Rule r;
    if (head != "-" && !head.empty())
        r.head = pat(db, head);
    r.tail = pat(db, tail);
    return r;
}

}  // namespace testutil
