#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "seqrules/core.hpp"
#include "seqrules/cover.hpp"

// Description-length computations. Everything is in real-valued bits; no
// materialized bitstream exists, but the three symbolic code streams are
// built explicitly so that encoding can be verified lossless by decoding.
//
// Model cost: L(R) = L(P) + L(R|P) over the set P of non-singleton heads
// and tails. Data cost: universal codes for the sequence counts plus
// prequential code lengths of the trigger/delay/gap streams.

namespace seqrules {

inline constexpr double kUniversalC0 = 2.865064;

// L_N(n): universal code length for integers n >= 1.
double universal_int(std::int64_t n);

// Prequential (KT-style, c = 0.5) code length of a symbol stream over an
// alphabet of `num_symbols` ids in [0, num_symbols). An empty stream costs
// 0 bits regardless of num_symbols.
double prequential_length(std::span<const std::int32_t> stream, std::int64_t num_symbols);

enum class TrigKind : std::uint8_t { Hit, Miss, Select };
enum class DelayKind : std::uint8_t { Start, Delay };
enum class GapKind : std::uint8_t { Fill, Gap };

struct TrigCode {
    std::int32_t rule;
    TrigKind kind;
    bool operator==(const TrigCode&) const = default;
};
struct DelayCode {
    std::int32_t rule;
    DelayKind kind;
    bool operator==(const DelayCode&) const = default;
};
struct GapCode {
    std::int32_t rule;
    GapKind kind;
    bool operator==(const GapCode&) const = default;
};

struct CodeStreams {
    std::vector<TrigCode> trigger;  // C_t: hit/miss per trigger, selectors for empty-head windows
    std::vector<DelayCode> delay;   // C_d: d delay codes then one start code per hit
    std::vector<GapCode> gap;       // C_g: fill/gap per position inside a started tail
    bool operator==(const CodeStreams&) const = default;
};

struct ModelCost {
    double patterns = 0;  // L(P)
    double rules = 0;     // L(R|P)
    double total = 0;
};

struct DataCost {
    double counts = 0;   // L_N(|D|) + sum L_N(|S|)
    double trigger = 0;  // L(C_t)
    double delay = 0;    // L(C_d)
    double gap = 0;      // L(C_g)
    double total = 0;
};

ModelCost model_length(const RuleSet& rules);

// Left-to-right deterministic simulation of the cover; see decode() for the
// inverse. Throws std::invalid_argument if the cover is not an exact cover
// of the database.
CodeStreams serialize_streams(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                              const SearchParams& params);

DataCost data_length(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                     const SearchParams& params);

double total_score(const DbIndex& idx, const RuleSet& rules, const Cover& cover,
                   const SearchParams& params);

// Reconstructs the event sequences from the code streams. Used to verify
// that the encoding is lossless; throws std::runtime_error on any stream
// inconsistency. The same params used for encoding must be supplied, since
// trigger detection depends on the gap budget.
std::vector<Sequence> decode(const CodeStreams& streams, const RuleSet& rules,
                             const std::vector<std::size_t>& seq_lengths,
                             const SearchParams& params);

}  // namespace seqrules
