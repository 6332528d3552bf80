#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "somnotherm/errors.hpp"
#include "somnotherm/stager.hpp"

namespace somnotherm {

/// Controller automaton states: raise, lower, or hold the ambient setpoint.
enum class DfaState { Minus = -1, Neutral = 0, Plus = 1 };

inline int dfa_code(DfaState s) { return static_cast<int>(s); }

inline const char* dfa_name(DfaState s) {
    switch (s) {
        case DfaState::Plus: return "PLUS";
        case DfaState::Minus: return "MINUS";
        case DfaState::Neutral: return "NEUTRAL";
    }
    throw ArgumentError("invalid DFA state");
}

inline DfaState dfa_from_name(const std::string& name) {
    if (name == "PLUS") return DfaState::Plus;
    if (name == "MINUS") return DfaState::Minus;
    if (name == "NEUTRAL") return DfaState::Neutral;
    throw ArgumentError("unknown DFA state '" + name + "'");
}

struct ControllerConfig {
    double baseline_ta = std::numeric_limits<double>::quiet_NaN();  // degC, user-provided, required
    double neg_delta_0 = 0.6;     // degC, initial downward step
    double pos_delta_0 = 0.4;     // degC, initial upward step
    double crossover_hours = 3.5; // when pos and neg steps meet
    double min_ta = 10.0;         // degC, hard cold floor
    double max_offset = 3.0;      // degC, comfort band around baseline
    double tick = 300.0;          // seconds per control step

    void validate() const {
        if (!std::isfinite(baseline_ta))
            throw ArgumentError("controller config: baseline_ta is required");
        if (!(neg_delta_0 > pos_delta_0 && pos_delta_0 > 0.0))
            throw ArgumentError("controller config: require neg_delta_0 > pos_delta_0 > 0");
        if (!(crossover_hours > 0.0))
            throw ArgumentError("controller config: crossover_hours must be positive");
        if (!(min_ta < baseline_ta))
            throw ArgumentError("controller config: require min_ta < baseline_ta");
        if (!(max_offset > 0.0))
            throw ArgumentError("controller config: max_offset must be positive");
        if (!(tick > 0.0)) throw ArgumentError("controller config: tick must be positive");
    }

    double floor_ta() const { return std::max(min_ta, baseline_ta - max_offset); }
    double ceil_ta() const { return baseline_ta + max_offset; }
};

struct DeltaPair {
    double pos = 0.0;  // degC added on a Plus step
    double neg = 0.0;  // degC removed on a Minus step
};

/// Time-varying step sizes. Both laws are linear in elapsed hours with rate
/// r = (neg0 - pos0) / (2 * crossover), so they meet exactly at the
/// crossover; afterwards pos keeps growing until it is capped at neg0 and
/// neg keeps shrinking toward 0.
inline DeltaPair delta_schedule(double elapsed_s, const ControllerConfig& cfg) {
    if (elapsed_s < 0.0) throw ArgumentError("delta_schedule: negative elapsed time");
    const double th = elapsed_s / 3600.0;
    const double rate = (cfg.neg_delta_0 - cfg.pos_delta_0) / (2.0 * cfg.crossover_hours);
    DeltaPair d;
    d.pos = std::min(cfg.pos_delta_0 + rate * th, cfg.neg_delta_0);
    d.neg = std::max(cfg.neg_delta_0 - rate * th, 0.0);
    return d;
}

/// Slope of the stage trajectory as consumed by the automaton; only its sign
/// matters.
inline int slope(int prev_depth, int curr_depth) { return curr_depth - prev_depth; }

struct ControllerState {
    DfaState dfa = DfaState::Neutral;
    double ta = 0.0;          // degC, current ambient command
    double elapsed = 0.0;     // seconds since control start
    std::optional<int> prev_depth;  // absent before the first step
};

inline ControllerState initial_state(const ControllerConfig& cfg) {
    cfg.validate();
    return ControllerState{DfaState::Neutral, cfg.baseline_ta, 0.0, std::nullopt};
}

struct ProfilePoint {
    double t = 0.0;   // seconds
    double ta = 0.0;  // degC
    DfaState dfa = DfaState::Neutral;
    SleepStage stage = SleepStage::LIGHT;
};

/// Commanded ambient temperature over the night, one point per tick.
struct TemperatureProfile {
    std::vector<ProfilePoint> points;

    bool empty() const { return points.empty(); }
};

/// One control step: derive the slope from the previous stage depth (absent
/// on the first call -> slope 0), move to the matching automaton state, apply
/// the scheduled delta, clamp into [floor_ta, ceil_ta], advance time.
inline std::pair<ControllerState, ProfilePoint> step(const ControllerState& state,
                                                     SleepStage stage,
                                                     const ControllerConfig& cfg) {
    const int curr = depth_code(stage);
    const int sl = state.prev_depth ? slope(*state.prev_depth, curr) : 0;

    const DeltaPair d = delta_schedule(state.elapsed, cfg);
    DfaState dfa = DfaState::Neutral;
    double ta = state.ta;
    if (sl > 0) {
        dfa = DfaState::Plus;
        ta += d.pos;
    } else if (sl < 0) {
        dfa = DfaState::Minus;
        ta -= d.neg;
    }
    ta = std::clamp(ta, cfg.floor_ta(), cfg.ceil_ta());

    const ProfilePoint pt{state.elapsed, ta, dfa, stage};
    ControllerState next{dfa, ta, state.elapsed + cfg.tick, curr};
    return {next, pt};
}

/// Fold step over a stage sequence; an empty sequence yields an empty profile.
inline TemperatureProfile run(const std::vector<SleepStage>& stages, const ControllerConfig& cfg) {
    cfg.validate();
    TemperatureProfile profile;
    profile.points.reserve(stages.size());
    ControllerState state = initial_state(cfg);
    for (SleepStage s : stages) {
        auto [next, pt] = step(state, s, cfg);
        state = next;
        profile.points.push_back(pt);
    }
    return profile;
}

inline TemperatureProfile run(const Hypnogram& h, const ControllerConfig& cfg) {
    std::vector<SleepStage> stages;
    stages.reserve(h.size());
    for (const auto& e : h.epochs) stages.push_back(e.stage);
    return run(stages, cfg);
}

}  // namespace somnotherm
