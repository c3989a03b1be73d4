#pragma once

#include <cstdint>
#include <random>

namespace seqrules {

// mt19937_64 with hand-rolled draws so that a seed reproduces the same
// stream on every platform (the std distributions are
// implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // [0, 1)
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // inclusive bounds
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Number of consecutive successes at rate p.
    std::int64_t geometric(double p) {
        std::int64_t n = 0;
        while (bernoulli(p))
            ++n;
        return n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j =
                static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace seqrules
