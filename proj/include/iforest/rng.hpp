#pragma once

#include <cmath>
#include <cstdint>

namespace iforest {

// Deterministic 64-bit generator (splitmix64). All sampling in the library
// goes through this so results are bit-reproducible across platforms and
// standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Uniform integer in [0, n). n must be nonzero.
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    // Standard normal via Box-Muller.
    double gaussian() {
        const double u1 = 1.0 - uniform01(); // (0, 1], keeps the log finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    std::uint64_t state() const { return state_; }

    // Derives an independent stream for a (seed, salt) pair.
    static std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
        Rng a(salt);
        Rng b(seed ^ a.next_u64());
        return b.next_u64();
    }

private:
    static constexpr double two_pi = 6.283185307179586476925287;
    std::uint64_t state_;
};

} // namespace iforest
