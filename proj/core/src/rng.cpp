#include "fln/rng.hpp"

#include <cmath>

#include "fln/errors.hpp"

namespace fln {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

// splitmix64: expands the user seed into the four xoshiro state words so
// that small or similar seeds still yield well-mixed states.
inline std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    for (auto& w : s_) w = splitmix64(seed);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01() {
    // Top 53 bits scaled by 2^-53: exact, uniform on the representable grid.
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    if (!(lo < hi))
        throw ArgumentError("uniform: empty range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ")");
    return lo + uniform01() * (hi - lo);
}

std::vector<double> Rng::uniform_vec(std::size_t n, double lo, double hi) {
    if (!(lo < hi))
        throw ArgumentError("uniform_vec: empty range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ")");
    std::vector<double> out(n);
    for (double& v : out) v = lo + uniform01() * (hi - lo);
    return out;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    // Box-Muller. 1 - uniform01() lies in (0, 1], keeping the log finite.
    const double u1 = 1.0 - uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw ArgumentError("below: n must be nonzero");
    // Multiply-shift mapping of a 64-bit draw into [0, n). The bias is at
    // most n / 2^64, far below anything observable here; what matters is
    // that the mapping is a pure function of the stream.
    const unsigned __int128 prod =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(prod >> 64);
}

} // namespace fln
