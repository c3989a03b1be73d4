#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "seqrules/core.hpp"

// Synthetic benchmark generator: plants a random rule set into a background
// of uniform noise. Empty-head rules are written as contiguous patterns
// into the initial sequence; conditional rules fire per trigger with the
// configured confidence, inserting their tails after a geometric delay and
// with geometric gaps. Optionally every event is flipped to a uniform
// random one afterwards (destructive noise).

namespace seqrules {

struct GenConfig {
    std::int64_t alphabet_size = 500;
    std::int64_t num_rules = 20;
    std::int64_t head_size = 2;
    std::int64_t tail_size = 2;
    double confidence = 0.75;
    bool heads_as_patterns = true;  // plant an extra (empty head -> X) per rule X -> Y
    std::int64_t initial_length = 10000;
    double noise_fraction = 0.5;
    double delay_prob = 0.2;
    double gap_prob = 0.1;
    double flip_prob = 0.0;     // destructive noise
    bool lex_order = false;     // sort head/tail events ascending
    std::uint64_t seed = 1;

    void validate() const;  // throws std::invalid_argument
};

struct PlantedWindow {
    Rule rule;
    std::int32_t seq = 0;
    std::uint32_t i = 0, j = 0;            // head span (0 when the head is empty)
    std::uint32_t k = 0, l = 0;            // tail span
    std::vector<std::uint32_t> tail_positions;
    std::int64_t drawn_delay = 0;
    std::int64_t drawn_gaps = 0;
};

struct PlantedStats {
    std::int64_t triggers = 0;
    std::int64_t hits = 0;
};

struct GroundTruth {
    RuleSet rules;  // singletons plus the planted rules

    std::vector<PlantedWindow> windows;  // final (post-insertion) coordinates
    std::unordered_map<Rule, PlantedStats, RuleHash> realized;
    std::int64_t initial_noise_events = 0;
    std::int64_t initial_length = 0;

    GroundTruth() : rules(0) {}
    std::vector<Rule> planted() const { return rules.extras(); }
};

GroundTruth gen_ruleset(const GenConfig& config);

// Generates the database for a previously sampled rule set, filling in the
// ground truth bookkeeping. The RNG continues from the config seed, so
// (gen_ruleset, gen_data) as a pair is reproducible.
SequenceDatabase gen_data(const GenConfig& config, GroundTruth& truth);

// Convenience: both steps.
std::pair<SequenceDatabase, GroundTruth> generate(const GenConfig& config);

}  // namespace seqrules
