#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "somnotherm/controller.hpp"
#include "somnotherm/errors.hpp"
#include "somnotherm/rng.hpp"
#include "somnotherm/rr.hpp"
#include "somnotherm/spectral.hpp"
#include "somnotherm/stager.hpp"

namespace somnotherm {

struct StageAmps {
    double lf_amp = 0.0;  // seconds, LF tone amplitude
    double hf_amp = 0.0;  // seconds, HF tone amplitude
};

/// Generative model for ground-truth nights: cycle-structured hypnograms and
/// stage-conditioned two-tone RR tachograms. Everything is deterministic in
/// the seed.
struct SimConfig {
    std::uint64_t seed = 42;
    double duration_h = 8.0;
    double cycle_mean_min = 90.0;
    double cycle_sd_min = 20.0;
    double base_rr = 0.9;   // seconds
    double lf_freq = 0.10;  // Hz
    double hf_freq = 0.25;  // Hz
    StageAmps sws_amps{0.01, 0.03};
    StageAmps light_amps{0.02, 0.02};
    StageAmps rem_amps{0.035, 0.015};
    StageAmps wake_amps{0.04, 0.03};
    double rem_peak_wander = 0.8;  // Hz span of HF peak movement in REM
    double noise_sd = 0.005;       // seconds, per-beat Gaussian noise

    const StageAmps& amps(SleepStage s) const {
        switch (s) {
            case SleepStage::SWS: return sws_amps;
            case SleepStage::LIGHT: return light_amps;
            case SleepStage::REM: return rem_amps;
            case SleepStage::WAKE: return wake_amps;
        }
        throw ArgumentError("invalid sleep stage");
    }

    void validate() const {
        if (!(duration_h > 0.0)) throw ArgumentError("sim config: duration must be positive");
        if (!(cycle_mean_min > 3.0 * cycle_sd_min))
            throw ArgumentError("sim config: require cycle_mean > 3 * cycle_sd");
        if (!(base_rr > 0.0)) throw ArgumentError("sim config: base_rr must be positive");
        for (SleepStage s : all_stages) {
            const auto& a = amps(s);
            if (!(a.lf_amp >= 0.0 && a.hf_amp >= 0.0 && a.lf_amp + a.hf_amp < base_rr / 4.0))
                throw ArgumentError("sim config: stage amplitudes must keep intervals positive");
        }
        if (!(rem_peak_wander >= 0.0 && noise_sd >= 0.0))
            throw ArgumentError("sim config: wander and noise must be nonnegative");
    }
};

inline constexpr double kEpochSeconds = 300.0;

namespace detail {

// Linear per-cycle stage budgets: SWS share shrinks and REM share grows from
// the first to the last cycle of the night.
inline double sws_fraction(std::size_t cycle, std::size_t n_cycles) {
    if (n_cycles <= 1) return 0.35;
    const double f = static_cast<double>(cycle) / static_cast<double>(n_cycles - 1);
    return 0.35 + f * (0.05 - 0.35);
}

inline double rem_fraction(std::size_t cycle, std::size_t n_cycles) {
    if (n_cycles <= 1) return 0.10;
    const double f = static_cast<double>(cycle) / static_cast<double>(n_cycles - 1);
    return 0.10 + f * (0.35 - 0.10);
}

}  // namespace detail

/// Ground-truth hypnogram: normally distributed cycle lengths (clipped to
/// mean +- 2 sd), each cycle laid out LIGHT -> SWS -> LIGHT -> REM, epochs
/// quantized to 5-minute boundaries and truncated at the configured duration.
inline Hypnogram gen_hypnogram(const SimConfig& cfg) {
    cfg.validate();
    SeededRng rng = SeededRng::stream(cfg.seed, 1);

    const double duration_min = cfg.duration_h * 60.0;
    const auto total_epochs = static_cast<std::size_t>(std::floor(duration_min * 60.0 / kEpochSeconds));
    if (total_epochs == 0) throw ArgumentError("gen_hypnogram: duration shorter than one epoch");

    std::vector<double> cycle_min;
    double acc = 0.0;
    while (acc < duration_min) {
        const double lo = cfg.cycle_mean_min - 2.0 * cfg.cycle_sd_min;
        const double hi = cfg.cycle_mean_min + 2.0 * cfg.cycle_sd_min;
        const double len = std::clamp(rng.gauss(cfg.cycle_mean_min, cfg.cycle_sd_min), lo, hi);
        cycle_min.push_back(len);
        acc += len;
    }

    // Cycle boundaries in whole epochs; the last cycle is truncated.
    std::vector<std::size_t> bounds{0};
    double cum = 0.0;
    for (double len : cycle_min) {
        cum += len;
        const auto b = std::min(total_epochs,
                                static_cast<std::size_t>(std::llround(cum * 60.0 / kEpochSeconds)));
        if (b > bounds.back()) bounds.push_back(b);
    }
    if (bounds.back() != total_epochs) bounds.push_back(total_epochs);
    const std::size_t n_cycles = bounds.size() - 1;

    Hypnogram h;
    h.epochs.reserve(total_epochs);
    auto push = [&h](std::size_t count, SleepStage s) {
        for (std::size_t i = 0; i < count; ++i) {
            const double t0 = static_cast<double>(h.epochs.size()) * kEpochSeconds;
            h.epochs.push_back({t0, t0 + kEpochSeconds, s});
        }
    };
    for (std::size_t c = 0; c < n_cycles; ++c) {
        const std::size_t n = bounds[c + 1] - bounds[c];
        auto sws = static_cast<std::size_t>(
            std::llround(detail::sws_fraction(c, n_cycles) * static_cast<double>(n)));
        auto rem = static_cast<std::size_t>(
            std::llround(detail::rem_fraction(c, n_cycles) * static_cast<double>(n)));
        while (sws + rem > n) (sws > rem ? sws : rem) -= 1;
        const std::size_t light = n - sws - rem;
        const std::size_t light_front = light - light / 2;
        push(light_front, SleepStage::LIGHT);
        push(sws, SleepStage::SWS);
        push(light / 2, SleepStage::LIGHT);
        push(rem, SleepStage::REM);
    }
    return h;
}

namespace detail {

// Per-epoch HF tone frequency. Outside REM the tone sits at hf_freq. Inside a
// REM segment the peak wanders across [hf_freq, hf_freq + wander]: draws
// alternate between the bottom and top slivers of that span on a schedule
// anchored to the segment, which guarantees that the trailing three-window
// rolling range exceeds the detection threshold inside the segment and
// settles again within two epochs of its end.
inline std::vector<double> epoch_hf_freqs(const Hypnogram& truth, const SimConfig& cfg,
                                          SeededRng& rng) {
    const double span = cfg.rem_peak_wander;
    std::vector<double> f(truth.size(), cfg.hf_freq);
    std::size_t i = 0;
    while (i < truth.size()) {
        if (truth.epochs[i].stage != SleepStage::REM) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < truth.size() && truth.epochs[j].stage == SleepStage::REM) ++j;
        const std::size_t len = j - i;

        // High-draw positions: start of segment, then every third epoch, but
        // kept off the last two epochs when the segment is long enough.
        std::vector<bool> high(len, false);
        high[0] = true;
        std::size_t pos = 0;
        while (len >= 3 && pos + 2 < len - 1) {
            pos = std::min(pos + 3, len - 3);
            high[pos] = true;
        }
        for (std::size_t k = 0; k < len; ++k) {
            const double u = rng.uniform01();
            f[i + k] = high[k] ? cfg.hf_freq + (0.90 + 0.0375 * u) * span
                               : cfg.hf_freq + 0.05 * u * span;
        }
        i = j;
    }
    return f;
}

}  // namespace detail

/// Stage-conditioned synthetic tachogram: RR(t) = base + LF tone + HF tone +
/// Gaussian noise, with per-stage amplitudes and a wandering HF frequency in
/// REM. Beats are placed by integration (next = prev + RR(prev)); generation
/// overshoots the hypnogram end by one beat so the final window stays whole.
inline RRSeries gen_rr(const Hypnogram& truth, const SimConfig& cfg) {
    cfg.validate();
    if (truth.empty()) throw ArgumentError("gen_rr: empty hypnogram");
    SeededRng rng = SeededRng::stream(cfg.seed, 2);

    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const auto hf_freqs = detail::epoch_hf_freqs(truth, cfg, rng);

    const double t_end = truth.epochs.back().t_end;
    std::vector<double> intervals;
    intervals.reserve(static_cast<std::size_t>(t_end / cfg.base_rr) + 4);

    double t = 0.0;
    while (t < t_end) {
        const auto epoch = std::min(truth.size() - 1,
                                    static_cast<std::size_t>(t / kEpochSeconds));
        const auto& amps = cfg.amps(truth.epochs[epoch].stage);
        const double two_pi = 2.0 * std::numbers::pi;
        double rr = cfg.base_rr +
                    amps.lf_amp * std::sin(two_pi * cfg.lf_freq * t) +
                    amps.hf_amp * std::sin(two_pi * hf_freqs[epoch] * t + phase) +
                    rng.gauss(0.0, cfg.noise_sd);
        rr = std::max(rr, 0.05);  // generator safety net, never hit with valid configs
        intervals.push_back(rr);
        t += rr;
    }
    return make_rr_series(std::move(intervals), "sim-" + std::to_string(cfg.seed));
}

/// Full closed-loop session: ground truth plus everything the pipeline
/// derived from the synthetic tachogram.
struct SessionReport {
    Hypnogram truth;
    Hypnogram detected;
    std::vector<SpectralWindow> windows;  // unsmoothed, one per epoch
    TemperatureProfile profile;
    double epoch_accuracy = 0.0;
    std::map<SleepStage, double> percentages;  // of the detected hypnogram
};

/// Run the whole pipeline against a generated night and score it against the
/// generator's ground truth.
inline SessionReport closed_loop_run(const SimConfig& sim_cfg,
                                     const SpectralConfig& spectral_cfg,
                                     const StagerConfig& stager_cfg,
                                     const ControllerConfig& controller_cfg,
                                     const FrequencyBands& bands = {}) {
    sim_cfg.validate();
    spectral_cfg.validate(bands);
    stager_cfg.validate();
    controller_cfg.validate();
    if (std::fabs(controller_cfg.tick - spectral_cfg.window_len) > 1e-9)
        throw ArgumentError("closed_loop_run: controller tick must equal the window length");

    SessionReport report;
    report.truth = gen_hypnogram(sim_cfg);
    const RRSeries rr = gen_rr(report.truth, sim_cfg);
    report.windows = windowize(rr, spectral_cfg, bands);
    const auto smoothed = smooth_windows(report.windows, stager_cfg);
    report.detected = classify(smoothed, stager_cfg);
    report.profile = run(report.detected, controller_cfg);

    const std::size_t n = std::min(report.truth.size(), report.detected.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (report.truth.epochs[i].stage == report.detected.epochs[i].stage) ++hits;
    report.epoch_accuracy = n == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(n);
    report.percentages = stage_percentages(report.detected);
    return report;
}

}  // namespace somnotherm
