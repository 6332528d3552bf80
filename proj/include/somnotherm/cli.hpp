#pragma once

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "somnotherm/config.hpp"
#include "somnotherm/csvio.hpp"
#include "somnotherm/simulator.hpp"

namespace somnotherm::cli {

namespace detail {

struct CommonArgs {
    std::string input;
    std::string out_dir;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> baseline_ta;
};

inline PipelineConfig load_config(const CommonArgs& args) {
    PipelineConfig cfg;
    if (!args.config_path.empty())
        cfg = parse_config_json_text(io::read_file(args.config_path));
    // Flags win over config-file values.
    if (args.seed) cfg.sim.seed = *args.seed;
    if (args.baseline_ta) cfg.controller.baseline_ta = *args.baseline_ta;
    return cfg;
}

inline void require_baseline(const PipelineConfig& cfg) {
    if (!std::isfinite(cfg.controller.baseline_ta))
        throw ArgumentError(
            "baseline_ta is required: pass --baseline-ta or set baseline_ta in --config");
}

inline RRSeries load_rr(const std::string& path, const IngestConfig& ingest) {
    const std::string text = io::read_file(path);
    RRSeries series = parse_rr(text, std::filesystem::path(path).stem().string());
    return filter_artifacts(series, ingest).series;
}

inline std::filesystem::path ensure_out_dir(const std::string& out) {
    std::filesystem::path dir(out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + out + "': " + ec.message());
    return dir;
}

inline int cmd_analyze(const CommonArgs& args) {
    const PipelineConfig cfg = load_config(args);
    const RRSeries series = load_rr(args.input, cfg.ingest);
    const auto windows = windowize(series, cfg.spectral, cfg.bands);
    const auto dir = ensure_out_dir(args.out_dir);
    io::write_file(dir / "windows.csv", io::windows_csv(windows));
    std::cout << "wrote " << (dir / "windows.csv").string() << " (" << windows.size()
              << " windows)\n";
    return 0;
}

inline int cmd_stage(const CommonArgs& args) {
    const PipelineConfig cfg = load_config(args);
    const RRSeries series = load_rr(args.input, cfg.ingest);
    const auto windows = windowize(series, cfg.spectral, cfg.bands);
    const auto detected = classify(smooth_windows(windows, cfg.stager), cfg.stager);
    const auto pct = stage_percentages(detected);
    const auto dir = ensure_out_dir(args.out_dir);
    io::write_file(dir / "detected.csv", io::hypnogram_csv(detected));
    io::write_file(dir / "percentages.json", io::percentages_json(pct).dump(2) + "\n");
    std::cout << "wrote " << (dir / "detected.csv").string() << " (" << detected.size()
              << " epochs)\n";
    return 0;
}

inline int cmd_control(const CommonArgs& args) {
    const PipelineConfig cfg = load_config(args);
    require_baseline(cfg);
    const RRSeries series = load_rr(args.input, cfg.ingest);
    const auto windows = windowize(series, cfg.spectral, cfg.bands);
    const auto detected = classify(smooth_windows(windows, cfg.stager), cfg.stager);
    const auto profile = run(detected, cfg.controller);
    const auto dir = ensure_out_dir(args.out_dir);
    io::write_file(dir / "profile.csv", io::profile_csv(profile));
    std::cout << "wrote " << (dir / "profile.csv").string() << " (" << profile.points.size()
              << " points)\n";
    return 0;
}

inline int cmd_simulate(const CommonArgs& args) {
    const PipelineConfig cfg = load_config(args);
    require_baseline(cfg);
    const SessionReport report =
        closed_loop_run(cfg.sim, cfg.spectral, cfg.stager, cfg.controller, cfg.bands);
    const RRSeries rr = gen_rr(report.truth, cfg.sim);

    const auto dir = ensure_out_dir(args.out_dir);
    io::write_file(dir / "rr.csv", serialize_rr(rr));
    io::write_file(dir / "windows.csv", io::windows_csv(report.windows));
    io::write_file(dir / "truth.csv", io::hypnogram_csv(report.truth));
    io::write_file(dir / "detected.csv", io::hypnogram_csv(report.detected));
    io::write_file(dir / "profile.csv", io::profile_csv(report.profile));
    nlohmann::json j;
    j["epoch_accuracy"] = report.epoch_accuracy;
    j["stage_percentages"] = io::percentages_json(report.percentages);
    io::write_file(dir / "report.json", j.dump(2) + "\n");

    std::cout << "epoch_accuracy=" << io::detail::fmt("%.6f", report.epoch_accuracy) << "\n";
    return 0;
}

inline int cmd_report(const CommonArgs& args) {
    const std::filesystem::path dir(args.input);
    const auto profile_path = dir / "profile.csv";
    if (!std::filesystem::exists(profile_path))
        throw IoError("missing " + profile_path.string());

    std::map<SleepStage, double> pct;
    if (std::filesystem::exists(dir / "report.json")) {
        const auto j = nlohmann::json::parse(io::read_file(dir / "report.json"));
        pct = io::parse_percentages_json(j.value("stage_percentages", nlohmann::json::object()));
    } else if (std::filesystem::exists(dir / "percentages.json")) {
        pct = io::parse_percentages_json(nlohmann::json::parse(io::read_file(dir / "percentages.json")));
    } else {
        throw IoError("missing " + (dir / "report.json").string() + " (or percentages.json)");
    }

    const auto summary = io::parse_profile_summary(io::read_file(profile_path));

    std::cout << "stage        time %\n";
    for (SleepStage s : all_stages) {
        const std::string name = stage_name(s);
        std::cout << name << std::string(9 - name.size(), ' ')
                  << io::detail::fmt("%10.6f", pct[s]) << "\n";
    }
    std::cout << "temperature degC: min=" << io::detail::fmt("%.6f", summary.ta_min)
              << " max=" << io::detail::fmt("%.6f", summary.ta_max)
              << " final=" << io::detail::fmt("%.6f", summary.ta_final) << "\n";
    return 0;
}

}  // namespace detail

/// Entry point shared by the binary and the test suite.
inline int run(int argc, const char* const* argv) {
    CLI::App app{"RR-interval sleep staging and ambient temperature control pipeline"};
    app.require_subcommand(1);

    detail::CommonArgs args;
    double baseline = 0.0;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub, bool needs_input, bool needs_out) {
        if (needs_input)
            sub->add_option("--input", args.input, "input RR recording (text or t_s,rr_s CSV)")
                ->required();
        if (needs_out)
            sub->add_option("--out", args.out_dir, "output directory")->required();
        sub->add_option("--config", args.config_path, "JSON config file");
        auto* b = sub->add_option("--baseline-ta", baseline, "user comfort baseline, degC");
        b->each([&](const std::string&) { args.baseline_ta = baseline; });
        auto* s = sub->add_option("--seed", seed, "simulation seed override");
        s->each([&](const std::string&) { args.seed = seed; });
    };

    auto* analyze = app.add_subcommand("analyze", "per-window spectral summary -> windows.csv");
    add_common(analyze, true, true);
    auto* stage = app.add_subcommand("stage", "sleep staging -> detected.csv + percentages.json");
    add_common(stage, true, true);
    auto* control =
        app.add_subcommand("control", "full pipeline to temperature profile -> profile.csv");
    add_common(control, true, true);
    auto* simulate =
        app.add_subcommand("simulate", "synthetic closed-loop session -> report directory");
    add_common(simulate, false, true);
    auto* report = app.add_subcommand("report", "summarize a session directory");
    report->add_option("--input", args.input, "session directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (analyze->parsed()) return detail::cmd_analyze(args);
        if (stage->parsed()) return detail::cmd_stage(args);
        if (control->parsed()) return detail::cmd_control(args);
        if (simulate->parsed()) return detail::cmd_simulate(args);
        if (report->parsed()) return detail::cmd_report(args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

inline int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace somnotherm::cli
