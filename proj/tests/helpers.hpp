#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "somnotherm/rng.hpp"
#include "somnotherm/rr.hpp"
#include "somnotherm/spectral.hpp"

namespace test_helpers {

struct Tone {
    double freq = 0.0;  // Hz
    double amp = 0.0;   // seconds
};

/// Beat-by-beat tachogram for RR(t) = base + sum of tones (+ optional noise),
/// beats placed by integration like the simulator does.
inline somnotherm::RRSeries make_tachogram(double duration_s, double base_rr,
                                           const std::vector<Tone>& tones,
                                           double noise_sd = 0.0,
                                           std::uint64_t seed = 7) {
    somnotherm::SeededRng rng(seed);
    std::vector<double> intervals;
    double t = 0.0;
    while (t < duration_s) {
        double rr = base_rr;
        for (const auto& tone : tones)
            rr += tone.amp * std::sin(2.0 * std::numbers::pi * tone.freq * t);
        if (noise_sd > 0.0) rr += rng.gauss(0.0, noise_sd);
        intervals.push_back(rr);
        t += rr;
    }
    return somnotherm::make_rr_series(std::move(intervals), "test");
}

/// Evenly sampled multi-tone series (already on the resample grid).
inline std::vector<double> make_even_tones(std::size_t n, double fs,
                                           const std::vector<Tone>& tones) {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        for (const auto& tone : tones)
            x[i] += tone.amp * std::sin(2.0 * std::numbers::pi * tone.freq * t);
    }
    return x;
}

inline somnotherm::SpectralWindow make_window(double lf, double hf, double peak,
                                              double t_start = 0.0) {
    somnotherm::SpectralWindow w;
    w.t_start = t_start;
    w.t_end = t_start + 300.0;
    w.vlf_power = 0.0;
    w.lf_power = lf;
    w.hf_power = hf;
    w.lf_hf_ratio = hf > 0.0 ? lf / hf : 0.0;
    w.hf_peak_freq = peak;
    w.hf_peak_power = hf;
    w.beat_count = 333;
    return w;
}

}  // namespace test_helpers
