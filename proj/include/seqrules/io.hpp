#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "seqrules/core.hpp"
#include "seqrules/miner.hpp"

// Plain-text formats.
//
// Database: one sequence per line, whitespace-separated tokens, lines
// starting with '#' ignored.
//
// Model: an "alphabet:" line followed by one non-singleton rule per line
// ("rule: head -> tail", empty head written "-", optional [supp= conf=
// usage=] annotation), footer lines as comments. Singleton rules are
// implied by the alphabet. A bare "head -> tail" line (no prefix) is also
// accepted, which is the ground-truth format the generator emits.

namespace seqrules {

SequenceDatabase parse_database(std::istream& in, const std::string& name);
SequenceDatabase read_database(const std::string& path);
void write_database(std::ostream& out, const SequenceDatabase& db);

struct ModelEntryStats {
    std::int64_t supp = 0;
    double conf = 0;
    std::int64_t usage = 0;
};

struct ModelEntry {
    std::vector<std::string> head;  // empty for empty-head rules
    std::vector<std::string> tail;
    std::optional<ModelEntryStats> stats;
};

struct ModelDoc {
    std::vector<std::string> alphabet;
    std::vector<ModelEntry> entries;
};

ModelDoc parse_model(std::istream& in, const std::string& name);
ModelDoc read_model(const std::string& path);

// Maps a parsed model onto a fixed alphabet; unknown tokens are an error.
RuleSet doc_to_rules(const ModelDoc& doc, const Alphabet& alphabet);

// Builds rules while interning tokens (used by eval, where no database
// fixes the alphabet).
std::vector<Rule> doc_rules_interning(const ModelDoc& doc, Alphabet& alphabet);

struct ModelFooter {
    double l_model = 0;
    double l_data = 0;
    double total = 0;
    double null_total = 0;
};

void write_model(std::ostream& out, const Alphabet& alphabet, const RuleSet& rules,
                 const std::vector<ModelEntryStats>* extra_stats,
                 const ModelFooter* footer);

// Ground-truth style: bare rule lines only.
void write_rule_lines(std::ostream& out, const Alphabet& alphabet,
                      const std::vector<Rule>& rules);

std::vector<std::vector<std::string>> parse_patterns(std::istream& in, const std::string& name);
std::vector<std::vector<std::string>> read_patterns(const std::string& path);

std::string rule_to_string(const Rule& r, const Alphabet& alphabet);

}  // namespace seqrules
