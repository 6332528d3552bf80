#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace somnotherm {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random source. All distribution shaping is done here from
/// raw mt19937_64 output so that identical seeds give identical streams on
/// every platform (std::normal_distribution et al. are implementation-defined).
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

    /// Independent substream: same (seed, stream_id) -> same sequence.
    static SeededRng stream(std::uint64_t seed, std::uint64_t stream_id) {
        return SeededRng(splitmix64(seed ^ splitmix64(stream_id)));
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller (second variate discarded).
    double gauss() {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log() finite
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double gauss(double mean, double sd) { return mean + sd * gauss(); }

private:
    std::mt19937_64 eng_;
};

}  // namespace somnotherm
