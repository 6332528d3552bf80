// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned in code next to each check.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "somnotherm/cli.hpp"
#include "somnotherm/controller.hpp"
#include "somnotherm/rng.hpp"
#include "somnotherm/simulator.hpp"
#include "somnotherm/spectral.hpp"
#include "somnotherm/stager.hpp"

using namespace somnotherm;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> even_two_tone(std::size_t n, double fs) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        x[i] = 0.04 * std::sin(2.0 * std::numbers::pi * 0.10 * t) +
               0.02 * std::sin(2.0 * std::numbers::pi * 0.25 * t);
    }
    return x;
}

// --- criteria ---------------------------------------------------------------

void spectral_correctness() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    // Two-tone closed form: lf = 0.04^2/2, hf = 0.02^2/2, ratio 4.
    const auto x = even_two_tone(1200, 4.0);
    const auto spec = periodogram(x, 4.0);
    const FrequencyBands b;
    const double lf = band_power(spec, b.lf.low, b.lf.high);
    const double hf = band_power(spec, b.hf.low, b.hf.high);
    const double ratio = lf / hf;
    const double lf_want = 0.04 * 0.04 / 2.0;
    const double hf_want = 0.02 * 0.02 / 2.0;
    if (std::fabs(ratio - 4.0) > 0.10 * 4.0) ok = false;
    if (std::fabs(lf - lf_want) > 0.05 * lf_want) ok = false;
    if (std::fabs(hf - hf_want) > 0.05 * hf_want) ok = false;

    // Parseval additivity within 1e-6 relative on 100 seeded series.
    std::size_t parseval_bad = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        SeededRng rng(seed);
        std::vector<double> y(1200);
        for (auto& v : y) v = rng.gauss();
        const auto s = periodogram(y, 4.0);
        const double parts = band_power(s, b.vlf.low, b.vlf.high) +
                             band_power(s, b.lf.low, b.lf.high) +
                             band_power(s, b.hf.low, b.hf.high) +
                             band_power(s, b.hf.high, s.nyquist());
        const double total = total_power(s);
        if (std::fabs(parts - total) > 1e-6 * total) ++parseval_bad;
    }
    if (parseval_bad > 0) ok = false;

    const double elapsed = seconds_since(t0);
    if (elapsed >= 1.0) ok = false;

    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "ratio=%.4f lf=%.6e hf=%.6e parseval_violations=%zu runtime=%.3fs",
                  ratio, lf, hf, parseval_bad, elapsed);
    report("spectral-correctness", ok, buf);
}

void band_constants() {
    const FrequencyBands b;
    const bool ok = b.vlf.low == 0.0 && b.vlf.high == 0.04 && b.lf.low == 0.04 &&
                    b.lf.high == 0.15 && b.hf.low == 0.15 && b.hf.high == 0.40;
    report("band-constants", ok, "VLF 0-0.04, LF 0.04-0.15, HF 0.15-0.40 Hz");
}

SpectralWindow grid_window(double ratio, double peak, double t0) {
    SpectralWindow w;
    w.t_start = t0;
    w.t_end = t0 + 300.0;
    w.hf_power = 1.0;
    w.lf_power = ratio;
    w.lf_hf_ratio = ratio;
    w.hf_peak_freq = peak;
    w.hf_peak_power = 1.0;
    return w;
}

void classifier_rules() {
    // Exhaustive grid over ratios straddling 1.0 and trailing peak ranges
    // straddling 0.65 Hz; precedence REM > SWS > LIGHT must hold everywhere.
    const StagerConfig cfg;
    std::size_t mismatches = 0, cases = 0;
    const std::vector<double> ratios{0.2, 0.9, 0.999, 1.0, 1.001, 1.5, 4.0};
    const std::vector<double> ranges{0.0, 0.3, 0.649, 0.65, 0.651, 0.8};
    for (double ratio : ratios) {
        for (double range : ranges) {
            std::vector<SpectralWindow> windows;
            windows.push_back(grid_window(ratio, 0.20, 0.0));
            windows.push_back(grid_window(ratio, 0.20, 300.0));
            windows.push_back(grid_window(ratio, 0.20 + range, 600.0));
            const auto h = classify(windows, cfg);
            const SleepStage got = h.epochs[2].stage;
            SleepStage want = SleepStage::LIGHT;
            if (ratio < cfg.sws_ratio_threshold) want = SleepStage::SWS;
            if (range > cfg.rem_peak_variability_threshold) want = SleepStage::REM;
            ++cases;
            if (got != want) ++mismatches;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu cases, %zu mismatches", cases, mismatches);
    report("classifier-rules", mismatches == 0, buf);
}

void dfa_equivalence() {
    ControllerConfig cfg;
    cfg.baseline_ta = 24.0;
    std::size_t mismatches = 0;
    for (SleepStage prev : all_stages) {
        for (SleepStage curr : all_stages) {
            ControllerState s = initial_state(cfg);
            s.prev_depth = depth_code(prev);
            const auto [next, pt] = step(s, curr, cfg);
            const int sl = depth_code(curr) - depth_code(prev);
            const DfaState want =
                sl > 0 ? DfaState::Plus : sl < 0 ? DfaState::Minus : DfaState::Neutral;
            const double want_ta = 24.0 + (sl > 0 ? 0.4 : sl < 0 ? -0.6 : 0.0);
            if (pt.dfa != want || std::fabs(pt.ta - want_ta) > 1e-12) ++mismatches;
            (void)next;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "16 stage pairs, %zu mismatches", mismatches);
    report("dfa-equivalence", mismatches == 0, buf);
}

void delta_schedule_criterion() {
    ControllerConfig cfg;
    cfg.baseline_ta = 24.0;
    bool ok = true;

    const auto d0 = delta_schedule(0.0, cfg);
    if (d0.pos != 0.4 || d0.neg != 0.6) ok = false;

    const auto dc = delta_schedule(cfg.crossover_hours * 3600.0, cfg);
    if (std::fabs(dc.pos - dc.neg) > 1e-9) ok = false;

    double prev_gap = d0.neg - d0.pos;
    bool monotone = true;
    for (int minute = 1; minute <= 600; ++minute) {
        const auto d = delta_schedule(60.0 * minute, cfg);
        const double gap = d.neg - d.pos;
        if (gap > prev_gap + 1e-12) monotone = false;
        prev_gap = gap;
    }
    if (!monotone) ok = false;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "pos(0)=%.3f neg(0)=%.3f |pos-neg|(crossover)=%.2e monotone=%s",
                  d0.pos, d0.neg, std::fabs(dc.pos - dc.neg), monotone ? "yes" : "no");
    report("delta-schedule", ok, buf);
}

void clamp_safety() {
    SeededRng rng(20260810);
    std::size_t violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        ControllerConfig cfg;
        cfg.baseline_ta = rng.uniform(10.5, 30.0);
        const auto len = static_cast<std::size_t>(rng.uniform(1.0, 201.0));
        std::vector<SleepStage> stages;
        stages.reserve(len);
        for (std::size_t i = 0; i < len; ++i)
            stages.push_back(all_stages[static_cast<std::size_t>(rng.uniform(0.0, 4.0)) % 4]);
        const auto profile = run(stages, cfg);
        const double lo = std::max(10.0, cfg.baseline_ta - 3.0);
        const double hi = cfg.baseline_ta + 3.0;
        for (const auto& pt : profile.points)
            if (pt.ta < lo - 1e-12 || pt.ta > hi + 1e-12) ++violations;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "1000 random sequences, %zu violations", violations);
    report("clamp-safety", violations == 0, buf);
}

void end_to_end() {
    const auto t0 = std::chrono::steady_clock::now();
    ControllerConfig ctrl;
    ctrl.baseline_ta = 24.0;

    double acc_sum = 0.0;
    std::size_t light_ok = 0, shape_ok = 0;
    const std::size_t n_seeds = 20;
    for (std::uint64_t seed = 1; seed <= n_seeds; ++seed) {
        SimConfig sim;
        sim.seed = seed;
        const auto rep = closed_loop_run(sim, SpectralConfig{}, StagerConfig{}, ctrl);
        acc_sum += rep.epoch_accuracy;
        if (rep.percentages.at(SleepStage::LIGHT) > 50.0) ++light_ok;

        const auto& pts = rep.profile.points;
        double min_ta = pts.front().ta;
        std::size_t min_idx = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (pts[i].ta < min_ta) {
                min_ta = pts[i].ta;
                min_idx = i;
            }
        if (min_ta < ctrl.baseline_ta && min_idx < pts.size() - 1 && pts.back().ta > min_ta)
            ++shape_ok;
    }
    const double mean_acc = acc_sum / static_cast<double>(n_seeds);
    const double elapsed = seconds_since(t0);
    const bool ok = mean_acc >= 0.80 && light_ok == n_seeds && shape_ok == n_seeds &&
                    elapsed < 600.0;
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "mean_accuracy=%.4f light>50%%: %zu/20, cool-then-rewarm: %zu/20, "
                  "runtime=%.1fs",
                  mean_acc, light_ok, shape_ok, elapsed);
    report("end-to-end-oracle", ok, buf);
}

void determinism() {
    const fs::path base = fs::temp_directory_path() / "somnotherm_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    bool ok = true;
    std::string detail = "byte-identical simulate outputs";
    for (const char* name : {"a", "b"}) {
        std::ostringstream sink;  // keep the subcommand's stdout off the report
        auto* saved = std::cout.rdbuf(sink.rdbuf());
        const int rc = cli::run({"somnotherm", "simulate", "--out", (base / name).string(),
                                 "--seed", "42", "--baseline-ta", "24"});
        std::cout.rdbuf(saved);
        if (rc != 0) {
            ok = false;
            detail = "simulate exited nonzero";
        }
    }
    if (ok) {
        for (const char* f : {"rr.csv", "windows.csv", "truth.csv", "detected.csv",
                              "profile.csv", "report.json"}) {
            const auto a = io::read_file(base / "a" / f);
            const auto b = io::read_file(base / "b" / f);
            if (a != b || a.empty()) {
                ok = false;
                detail = std::string("mismatch in ") + f;
            }
        }
    }
    fs::remove_all(base);
    report("determinism", ok, detail);
}

}  // namespace

int main() {
    spectral_correctness();
    band_constants();
    classifier_rules();
    dfa_equivalence();
    delta_schedule_criterion();
    clamp_safety();
    end_to_end();
    determinism();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
