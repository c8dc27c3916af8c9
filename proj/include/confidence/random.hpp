#pragma once

// Seeded, reproducible random streams.  Draw sequences depend only on
// (seed, stream_index): the engine is mt19937_64 (fully specified by the
// standard) and all variate mappings are done from raw bits in-module, so
// equal parameters give bitwise-equal sequences.  Streams are not shared
// across concurrent tasks; derive one substream per task instead.

#include <cstdint>
#include <random>
#include <vector>

#include "confidence/numerics.hpp"

namespace confidence {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

} // namespace detail

class SeededStream {
public:
    explicit SeededStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_index_(stream_index) {
        std::uint64_t state = seed ^ (0xA3C59AC2ull + stream_index * 0x9E3779B97F4A7C15ull);
        std::seed_seq seq{static_cast<std::uint32_t>(detail::splitmix64(state)),
                          static_cast<std::uint32_t>(detail::splitmix64(state) >> 32),
                          static_cast<std::uint32_t>(detail::splitmix64(state)),
                          static_cast<std::uint32_t>(detail::splitmix64(state) >> 32),
                          static_cast<std::uint32_t>(detail::splitmix64(state))};
        engine_.seed(seq);
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    // Independent stream for replicate i; result does not depend on how many
    // draws were taken from this stream.
    SeededStream substream(std::uint64_t i) const {
        std::uint64_t state = stream_index_ ^ (i * 0xD1B54A32D192ED03ull + 0x2545F4914F6CDD1Dull);
        return SeededStream(seed_, detail::splitmix64(state) | 1ull);
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the inverse CDF; deterministic given the stream.
    double normal() { return std_normal_quantile(uniform()); }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    long long bernoulli(double p) { return uniform() < p ? 1 : 0; }

    // Binomial draw by inversion over the pmf recurrence; O(n).
    long long binomial(long long n, double theta) {
        if (n < 0 || !(theta >= 0.0 && theta <= 1.0))
            throw domain_error("SeededStream::binomial: invalid parameters");
        if (theta == 0.0) return 0;
        if (theta == 1.0) return n;
        const double u = uniform();
        double pmf = std::exp(static_cast<double>(n) * std::log1p(-theta));
        double cum = pmf;
        long long k = 0;
        const double odds = theta / (1.0 - theta);
        while (cum < u && k < n) {
            pmf *= (static_cast<double>(n - k) * odds) / static_cast<double>(k + 1);
            cum += pmf;
            ++k;
        }
        return k;
    }

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::mt19937_64 engine_;
};

} // namespace confidence
