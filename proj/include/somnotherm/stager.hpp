#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "somnotherm/errors.hpp"
#include "somnotherm/spectral.hpp"

namespace somnotherm {

/// Sleep stages with a numeric depth encoding ordered from deepest sleep to
/// wakefulness; the controller consumes differences of these codes.
enum class SleepStage { SWS, LIGHT, REM, WAKE };

inline int depth_code(SleepStage s) {
    switch (s) {
        case SleepStage::SWS: return 1;
        case SleepStage::LIGHT: return 2;
        case SleepStage::REM: return 3;
        case SleepStage::WAKE: return 4;
    }
    throw ArgumentError("invalid sleep stage");
}

inline SleepStage stage_from_depth(int code) {
    switch (code) {
        case 1: return SleepStage::SWS;
        case 2: return SleepStage::LIGHT;
        case 3: return SleepStage::REM;
        case 4: return SleepStage::WAKE;
    }
    throw ArgumentError("invalid depth code " + std::to_string(code));
}

inline const char* stage_name(SleepStage s) {
    switch (s) {
        case SleepStage::SWS: return "SWS";
        case SleepStage::LIGHT: return "LIGHT";
        case SleepStage::REM: return "REM";
        case SleepStage::WAKE: return "WAKE";
    }
    throw ArgumentError("invalid sleep stage");
}

inline SleepStage stage_from_name(const std::string& name) {
    if (name == "SWS") return SleepStage::SWS;
    if (name == "LIGHT") return SleepStage::LIGHT;
    if (name == "REM") return SleepStage::REM;
    if (name == "WAKE") return SleepStage::WAKE;
    throw ArgumentError("unknown sleep stage '" + name + "'");
}

inline constexpr std::array<SleepStage, 4> all_stages{SleepStage::SWS, SleepStage::LIGHT,
                                                      SleepStage::REM, SleepStage::WAKE};

struct HypnogramEpoch {
    double t_start = 0.0;  // seconds
    double t_end = 0.0;    // seconds
    SleepStage stage = SleepStage::LIGHT;
};

/// Contiguous, equal-duration stage epochs (one per spectral window).
struct Hypnogram {
    std::vector<HypnogramEpoch> epochs;

    std::size_t size() const { return epochs.size(); }
    bool empty() const { return epochs.empty(); }
    double duration() const { return epochs.empty() ? 0.0 : epochs.back().t_end - epochs.front().t_start; }
};

struct StagerConfig {
    double sws_ratio_threshold = 1.0;            // LF/HF below this -> SWS
    double rem_peak_variability_threshold = 0.65;  // Hz of HF-peak rolling range
    std::size_t smoothing_windows = 3;           // odd; 3 x 5 min = 15 min
    bool wake_detection = false;
    double wake_power_percentile = 90.0;

    void validate() const {
        if (!(sws_ratio_threshold > 0.0 && rem_peak_variability_threshold > 0.0))
            throw ArgumentError("stager config: thresholds must be positive");
        if (smoothing_windows < 1 || smoothing_windows % 2 == 0)
            throw ArgumentError("stager config: smoothing_windows must be odd and >= 1");
        if (!(wake_power_percentile > 0.0 && wake_power_percentile <= 100.0))
            throw ArgumentError("stager config: wake_power_percentile must be in (0, 100]");
    }
};

/// Centered moving average of band powers over cfg.smoothing_windows windows;
/// edge windows use truncated one-sided means so the full recording stays
/// covered. The LF/HF ratio is recomputed from the averaged powers; the HF
/// peak is kept from the center window unaveraged.
inline std::vector<SpectralWindow> smooth_windows(const std::vector<SpectralWindow>& windows,
                                                  const StagerConfig& cfg = {}) {
    cfg.validate();
    if (windows.size() < cfg.smoothing_windows)
        throw InsufficientDataError("smooth_windows: fewer windows than smoothing span");
    const std::size_t half = cfg.smoothing_windows / 2;
    std::vector<SpectralWindow> out;
    out.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(windows.size() - 1, i + half);
        SpectralWindow w = windows[i];
        double vlf = 0.0, lf = 0.0, hf = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) {
            vlf += windows[j].vlf_power;
            lf += windows[j].lf_power;
            hf += windows[j].hf_power;
        }
        const double n = static_cast<double>(hi - lo + 1);
        w.vlf_power = vlf / n;
        w.lf_power = lf / n;
        w.hf_power = hf / n;
        w.lf_hf_ratio = detail::lf_hf_ratio(w.lf_power, w.hf_power);
        out.push_back(w);
    }
    return out;
}

namespace detail {

inline double nearest_rank_percentile(std::vector<double> v, double pct) {
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(pct / 100.0 * static_cast<double>(v.size())));
    return v[std::min(v.size() - 1, rank > 0 ? rank - 1 : 0)];
}

}  // namespace detail

/// Rule-based classification of smoothed windows, one epoch per window.
/// Precedence (low to high): LIGHT default, SWS when LF/HF drops under the
/// threshold, REM when the HF peak frequency's rolling range over the
/// trailing smoothing span exceeds the variability threshold, WAKE (opt-in)
/// when total LF+HF power exceeds the recording's percentile cutoff.
inline Hypnogram classify(const std::vector<SpectralWindow>& windows, const StagerConfig& cfg = {}) {
    cfg.validate();
    if (windows.empty()) throw InsufficientDataError("classify: no windows");

    double wake_cutoff = 0.0;
    if (cfg.wake_detection) {
        std::vector<double> totals;
        totals.reserve(windows.size());
        for (const auto& w : windows) totals.push_back(w.lf_power + w.hf_power);
        wake_cutoff = detail::nearest_rank_percentile(std::move(totals), cfg.wake_power_percentile);
    }

    Hypnogram h;
    h.epochs.reserve(windows.size());
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        SleepStage stage = SleepStage::LIGHT;
        if (w.lf_hf_ratio < cfg.sws_ratio_threshold) stage = SleepStage::SWS;

        const std::size_t lo = i + 1 >= cfg.smoothing_windows ? i + 1 - cfg.smoothing_windows : 0;
        double pk_min = windows[lo].hf_peak_freq, pk_max = pk_min;
        for (std::size_t j = lo; j <= i; ++j) {
            pk_min = std::min(pk_min, windows[j].hf_peak_freq);
            pk_max = std::max(pk_max, windows[j].hf_peak_freq);
        }
        if (pk_max - pk_min > cfg.rem_peak_variability_threshold) stage = SleepStage::REM;

        if (cfg.wake_detection && w.lf_power + w.hf_power > wake_cutoff) stage = SleepStage::WAKE;

        h.epochs.push_back({w.t_start, w.t_end, stage});
    }
    return h;
}

/// Percent of total recording time spent in each stage; sums to 100.
inline std::map<SleepStage, double> stage_percentages(const Hypnogram& h) {
    if (h.empty()) throw ArgumentError("stage_percentages: empty hypnogram");
    std::map<SleepStage, double> acc;
    for (SleepStage s : all_stages) acc[s] = 0.0;
    double total = 0.0;
    for (const auto& e : h.epochs) {
        const double d = e.t_end - e.t_start;
        acc[e.stage] += d;
        total += d;
    }
    for (auto& [s, v] : acc) v = v / total * 100.0;
    return acc;
}

}  // namespace somnotherm
