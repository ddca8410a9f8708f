#ifndef H2PC_RANDOM_HPP
#define H2PC_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace h2pc {

// The standard distributions are implementation-defined, so sampled outputs
// would differ between standard libraries. These draw directly from the
// engine's bits and are reproducible everywhere.
using Rng = std::mt19937_64;

/// Uniform real in [0, 1) with 53 bits of resolution.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, bound). Rejection sampling, no modulo bias.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % bound;
}

/// Index drawn from a (not necessarily normalized) discrete distribution.
template <typename Weights>
int sample_categorical(Rng& rng, const Weights& weights, double total = 1.0) {
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    const int k = static_cast<int>(weights.size());
    for (int i = 0; i < k; ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    // Rounding left u at or above the running sum; take the last level with mass.
    for (int i = k - 1; i >= 0; --i) {
        if (weights[i] > 0.0) return i;
    }
    return k - 1;
}

template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(uniform_below(rng, i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace h2pc

#endif  // H2PC_RANDOM_HPP
