#include "seqrules/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "seqrules/rng.hpp"

namespace seqrules {

namespace {
constexpr std::uint64_t kDataStreamSalt = 0xD1B54A32D192ED03ULL;
}

void GenConfig::validate() const {
    if (alphabet_size < 1)
        throw std::invalid_argument("gen: alphabet_size must be >= 1");
    if (num_rules < 0)
        throw std::invalid_argument("gen: num_rules must be >= 0");
    if (head_size < 0)
        throw std::invalid_argument("gen: head_size must be >= 0");
    if (tail_size < 1)
        throw std::invalid_argument("gen: tail_size must be >= 1");
    if (initial_length < 1)
        throw std::invalid_argument("gen: initial_length must be >= 1");
    if (head_size == 0 && tail_size == 1 && num_rules > 0)
        throw std::invalid_argument("gen: head_size 0 with tail_size 1 plants only singletons");
    for (double p : {confidence, noise_fraction, delay_prob, gap_prob, flip_prob})
        if (p < 0.0 || p > 1.0 || !std::isfinite(p))
            throw std::invalid_argument("gen: probabilities must lie in [0,1]");
}

GroundTruth gen_ruleset(const GenConfig& config) {
    config.validate();
    Rng rng(config.seed);
    GroundTruth truth;
    truth.rules = RuleSet(static_cast<std::size_t>(config.alphabet_size));

    auto sample_pattern = [&](std::int64_t len) {
        Pattern p(static_cast<std::size_t>(len));
        for (auto& e : p)
            e = static_cast<EventId>(rng.uniform_int(0, config.alphabet_size - 1));
        if (config.lex_order)
            std::sort(p.begin(), p.end());
        return p;
    };

    for (std::int64_t n = 0; n < config.num_rules; ++n) {
        Rule r;
        int attempts = 0;
        do {
            r.head = sample_pattern(config.head_size);
            r.tail = sample_pattern(config.tail_size);
            if (++attempts > 10000)
                throw std::runtime_error("gen: cannot sample enough distinct rules");
        } while (!truth.rules.add(r));
        if (config.heads_as_patterns && !r.head.empty())
            truth.rules.add(Rule{{}, r.head});
    }
    return truth;
}

SequenceDatabase gen_data(const GenConfig& config, GroundTruth& truth) {
    config.validate();
    if (truth.rules.alphabet_size() != static_cast<std::size_t>(config.alphabet_size))
        throw std::invalid_argument("gen: rule set does not match the config alphabet");
    Rng rng(config.seed ^ kDataStreamSalt);
    const std::int64_t omega = config.alphabet_size;

    std::vector<const Rule*> pattern_rules;  // planted as-is
    std::vector<const Rule*> cond_rules;     // planted per trigger
    for (const Rule& r : truth.rules.extras())
        (r.empty_head() ? pattern_rules : cond_rules).push_back(&r);

    // Initial sequence: noise events plus whole pattern tails, arranged at
    // random. Leftover space a tail cannot fill becomes extra noise.
    std::int64_t n_noise = std::llround(config.noise_fraction *
                                        static_cast<double>(config.initial_length));
    n_noise = std::clamp<std::int64_t>(n_noise, 0, config.initial_length);
    std::int64_t remainder = config.initial_length - n_noise;

    std::vector<std::int32_t> items;  // -1 noise, otherwise pattern_rules index
    if (!pattern_rules.empty() && remainder > 0) {
        std::int64_t min_tail = config.initial_length + 1;
        for (const Rule* r : pattern_rules)
            min_tail = std::min<std::int64_t>(min_tail, static_cast<std::int64_t>(r->tail.size()));
        if (min_tail > config.initial_length)
            throw std::runtime_error("gen: no rule tail fits into the initial sequence");
        while (remainder >= min_tail) {
            std::vector<std::int32_t> fitting;
            for (std::size_t pi = 0; pi < pattern_rules.size(); ++pi)
                if (static_cast<std::int64_t>(pattern_rules[pi]->tail.size()) <= remainder)
                    fitting.push_back(static_cast<std::int32_t>(pi));
            const std::int32_t pick =
                fitting[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(fitting.size()) - 1))];
            items.push_back(pick);
            remainder -= static_cast<std::int64_t>(pattern_rules[static_cast<std::size_t>(pick)]->tail.size());
        }
    }
    n_noise += remainder;
    for (std::int64_t i = 0; i < n_noise; ++i)
        items.push_back(-1);
    rng.shuffle(items);

    Sequence initial;
    initial.reserve(static_cast<std::size_t>(config.initial_length));
    struct PatternPlacement {
        const Rule* rule;
        std::uint32_t start, end;  // initial-sequence coordinates
    };
    std::vector<PatternPlacement> placements;
    for (std::int32_t item : items) {
        if (item < 0) {
            initial.push_back(static_cast<EventId>(rng.uniform_int(0, omega - 1)));
            continue;
        }
        const Rule* r = pattern_rules[static_cast<std::size_t>(item)];
        const auto start = static_cast<std::uint32_t>(initial.size() + 1);
        initial.insert(initial.end(), r->tail.begin(), r->tail.end());
        placements.push_back({r, start, static_cast<std::uint32_t>(initial.size())});
    }
    truth.initial_noise_events = n_noise;
    truth.initial_length = static_cast<std::int64_t>(initial.size());

    // Conditional rules fire on triggers found in the pre-insertion
    // sequence; inserted material is not rescanned.
    const std::int64_t len0 = static_cast<std::int64_t>(initial.size());
    struct Insertion {
        EventId event;
        std::uint32_t ordinal;
    };
    std::vector<std::vector<Insertion>> after(static_cast<std::size_t>(len0) + 1);
    std::uint32_t next_ordinal = 0;
    struct HitRecord {
        const Rule* rule;
        std::uint32_t i0, j0;  // trigger in initial coordinates
        std::vector<std::uint32_t> ordinals;
        std::int64_t delay, gaps;
    };
    std::vector<HitRecord> hit_records;

    const SearchParams scan_params;  // generator triggers use the default budgets
    for (const Rule* r : cond_rules) {
        auto& stats = truth.realized[*r];
        for (const MinWin& w : minimal_windows(r->head, initial, scan_params.max_gap)) {
            ++stats.triggers;
            if (!rng.bernoulli(config.confidence))
                continue;
            ++stats.hits;
            HitRecord rec{r, w.start, w.end, {}, 0, 0};
            rec.delay = rng.geometric(config.delay_prob);
            std::int64_t anchor = std::min<std::int64_t>(w.end + rec.delay, len0);
            for (std::size_t t = 0; t < r->tail.size(); ++t) {
                if (t > 0) {
                    const std::int64_t g = rng.geometric(config.gap_prob);
                    rec.gaps += g;
                    anchor = std::min<std::int64_t>(anchor + g, len0);
                }
                after[static_cast<std::size_t>(anchor)].push_back({r->tail[t], next_ordinal});
                rec.ordinals.push_back(next_ordinal++);
            }
            hit_records.push_back(std::move(rec));
        }
    }

    // Assemble the final sequence, tracking where originals and insertions land.
    Sequence final;
    final.reserve(initial.size() + next_ordinal);
    std::vector<std::uint32_t> orig_pos(static_cast<std::size_t>(len0) + 1, 0);
    std::vector<std::uint32_t> ins_pos(next_ordinal, 0);
    for (std::int64_t q = 0; q <= len0; ++q) {
        if (q > 0) {
            final.push_back(initial[static_cast<std::size_t>(q - 1)]);
            orig_pos[static_cast<std::size_t>(q)] = static_cast<std::uint32_t>(final.size());
        }
        for (const Insertion& ins : after[static_cast<std::size_t>(q)]) {
            final.push_back(ins.event);
            ins_pos[ins.ordinal] = static_cast<std::uint32_t>(final.size());
        }
    }

    truth.windows.clear();
    for (const PatternPlacement& pp : placements) {
        PlantedWindow pw;
        pw.rule = *pp.rule;
        pw.k = orig_pos[pp.start];
        pw.l = orig_pos[pp.end];
        for (std::uint32_t q = pp.start; q <= pp.end; ++q)
            pw.tail_positions.push_back(orig_pos[q]);
        truth.windows.push_back(std::move(pw));
    }
    for (const HitRecord& rec : hit_records) {
        PlantedWindow pw;
        pw.rule = *rec.rule;
        pw.i = orig_pos[rec.i0];
        pw.j = orig_pos[rec.j0];
        for (std::uint32_t o : rec.ordinals)
            pw.tail_positions.push_back(ins_pos[o]);
        pw.k = pw.tail_positions.front();
        pw.l = pw.tail_positions.back();
        pw.drawn_delay = rec.delay;
        pw.drawn_gaps = rec.gaps;
        truth.windows.push_back(std::move(pw));
    }

    if (config.flip_prob > 0.0)
        for (auto& e : final)
            if (rng.bernoulli(config.flip_prob))
                e = static_cast<EventId>(rng.uniform_int(0, omega - 1));

    SequenceDatabase db;
    for (std::int64_t e = 0; e < omega; ++e)
        db.alphabet.intern("e" + std::to_string(e));
    db.sequences.push_back(std::move(final));
    return db;
}

std::pair<SequenceDatabase, GroundTruth> generate(const GenConfig& config) {
    GroundTruth truth = gen_ruleset(config);
    SequenceDatabase db = gen_data(config, truth);
    return {std::move(db), std::move(truth)};
}

}  // namespace seqrules
