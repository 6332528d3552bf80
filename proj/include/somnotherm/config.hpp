#pragma once

#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "somnotherm/controller.hpp"
#include "somnotherm/errors.hpp"
#include "somnotherm/simulator.hpp"
#include "somnotherm/spectral.hpp"
#include "somnotherm/stager.hpp"

namespace somnotherm {

/// All tunables of the pipeline in one place. The JSON form is a flat object
/// mirroring the field names below (every name is unique across the four
/// sections); unknown keys are rejected.
struct PipelineConfig {
    IngestConfig ingest;
    FrequencyBands bands;
    SpectralConfig spectral;
    StagerConfig stager;
    ControllerConfig controller;
    SimConfig sim;
};

namespace detail {

inline StageAmps parse_amps(const nlohmann::json& j, const char* stage) {
    if (!j.is_array() || j.size() != 2)
        throw ArgumentError(std::string("config: stage_amps.") + stage +
                            " must be an array [lf_amp, hf_amp]");
    return StageAmps{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace detail

inline PipelineConfig parse_config_json(const nlohmann::json& j, PipelineConfig cfg = {}) {
    if (!j.is_object()) throw ArgumentError("config: top level must be a JSON object");
    static const std::set<std::string> known{
        "window_len", "window_stride", "resample_rate", "taper", "hf_peak_search_upper",
        "sws_ratio_threshold", "rem_peak_variability_threshold", "smoothing_windows",
        "wake_detection", "wake_power_percentile",
        "baseline_ta", "neg_delta_0", "pos_delta_0", "crossover_hours", "min_ta",
        "max_offset", "tick",
        "seed", "duration", "cycle_mean", "cycle_sd", "base_rr", "lf_freq", "hf_freq",
        "stage_amps", "rem_peak_wander", "noise_sd",
        "min_rr", "max_rr", "max_relative_jump"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw ArgumentError("config: unknown key '" + key + "'");

    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };

    get("window_len", cfg.spectral.window_len);
    get("window_stride", cfg.spectral.window_stride);
    get("resample_rate", cfg.spectral.resample_rate);
    get("taper", cfg.spectral.hann_taper);
    get("hf_peak_search_upper", cfg.bands.hf_peak_search_upper);

    get("sws_ratio_threshold", cfg.stager.sws_ratio_threshold);
    get("rem_peak_variability_threshold", cfg.stager.rem_peak_variability_threshold);
    get("smoothing_windows", cfg.stager.smoothing_windows);
    get("wake_detection", cfg.stager.wake_detection);
    get("wake_power_percentile", cfg.stager.wake_power_percentile);

    get("baseline_ta", cfg.controller.baseline_ta);
    get("neg_delta_0", cfg.controller.neg_delta_0);
    get("pos_delta_0", cfg.controller.pos_delta_0);
    get("crossover_hours", cfg.controller.crossover_hours);
    get("min_ta", cfg.controller.min_ta);
    get("max_offset", cfg.controller.max_offset);
    get("tick", cfg.controller.tick);

    get("min_rr", cfg.ingest.min_rr);
    get("max_rr", cfg.ingest.max_rr);
    get("max_relative_jump", cfg.ingest.max_relative_jump);

    get("seed", cfg.sim.seed);
    get("duration", cfg.sim.duration_h);
    get("cycle_mean", cfg.sim.cycle_mean_min);
    get("cycle_sd", cfg.sim.cycle_sd_min);
    get("base_rr", cfg.sim.base_rr);
    get("lf_freq", cfg.sim.lf_freq);
    get("hf_freq", cfg.sim.hf_freq);
    get("rem_peak_wander", cfg.sim.rem_peak_wander);
    get("noise_sd", cfg.sim.noise_sd);
    if (j.contains("stage_amps")) {
        const auto& a = j.at("stage_amps");
        if (!a.is_object()) throw ArgumentError("config: stage_amps must be an object");
        for (const auto& [key, val] : a.items()) {
            if (key == "SWS") cfg.sim.sws_amps = detail::parse_amps(val, "SWS");
            else if (key == "LIGHT") cfg.sim.light_amps = detail::parse_amps(val, "LIGHT");
            else if (key == "REM") cfg.sim.rem_amps = detail::parse_amps(val, "REM");
            else if (key == "WAKE") cfg.sim.wake_amps = detail::parse_amps(val, "WAKE");
            else throw ArgumentError("config: unknown stage in stage_amps: '" + key + "'");
        }
    }
    return cfg;
}

inline PipelineConfig parse_config_json_text(const std::string& text, PipelineConfig cfg = {}) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ArgumentError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_config_json(j, std::move(cfg));
}

}  // namespace somnotherm
