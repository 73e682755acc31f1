#pragma once

#include <cstdint>
#include <vector>

namespace fln {

/// Seeded xoshiro256++ pseudo-random generator.
///
/// The stream is a pure function of the seed and is identical across
/// platforms and compilers: every draw is derived from 64-bit integer
/// arithmetic and exact power-of-two scaling, never from library
/// distributions (which vary between standard library implementations).
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01();

    /// Uniform double in [lo, hi). Throws ArgumentError unless lo < hi.
    double uniform(double lo, double hi);

    /// n i.i.d. uniforms in [lo, hi).
    std::vector<double> uniform_vec(std::size_t n, double lo, double hi);

    /// Standard normal via Box-Muller (consumes two uniforms per pair).
    double normal();

    /// Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n);

    /// Fisher-Yates shuffle driven by this stream.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::uint64_t s_[4];
    double spare_ = 0.0;   // cached second Box-Muller deviate
    bool has_spare_ = false;
};

} // namespace fln
