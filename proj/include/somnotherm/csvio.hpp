#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "somnotherm/controller.hpp"
#include "somnotherm/errors.hpp"
#include "somnotherm/rr.hpp"
#include "somnotherm/spectral.hpp"
#include "somnotherm/stager.hpp"

namespace somnotherm::io {

namespace detail {

inline std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

}  // namespace detail

inline std::string windows_csv(const std::vector<SpectralWindow>& windows) {
    std::string out = "t_start_s,t_end_s,vlf,lf,hf,lf_hf,hf_peak_hz,hf_peak_psd\n";
    for (const auto& w : windows) {
        out += detail::fmt("%.3f", w.t_start) + ',' + detail::fmt("%.3f", w.t_end) + ',' +
               detail::fmt("%.10g", w.vlf_power) + ',' + detail::fmt("%.10g", w.lf_power) + ',' +
               detail::fmt("%.10g", w.hf_power) + ',' + detail::fmt("%.10g", w.lf_hf_ratio) + ',' +
               detail::fmt("%.6f", w.hf_peak_freq) + ',' + detail::fmt("%.10g", w.hf_peak_power) +
               '\n';
    }
    return out;
}

inline std::string hypnogram_csv(const Hypnogram& h) {
    std::string out = "t_start_s,t_end_s,stage,depth_code\n";
    for (const auto& e : h.epochs) {
        out += detail::fmt("%.3f", e.t_start) + ',' + detail::fmt("%.3f", e.t_end) + ',' +
               stage_name(e.stage) + ',' + std::to_string(depth_code(e.stage)) + '\n';
    }
    return out;
}

inline Hypnogram parse_hypnogram_csv(const std::string& text) {
    Hypnogram h;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "t_start_s,t_end_s,stage,depth_code") continue;
        std::istringstream row(line);
        std::string t0, t1, stage;
        if (!std::getline(row, t0, ',') || !std::getline(row, t1, ',') ||
            !std::getline(row, stage, ','))
            throw ParseError("malformed hypnogram row", line_no);
        h.epochs.push_back({std::stod(t0), std::stod(t1), stage_from_name(stage)});
    }
    return h;
}

inline std::string profile_csv(const TemperatureProfile& p) {
    std::string out = "t_s,ta_c,dfa,stage\n";
    for (const auto& pt : p.points) {
        out += detail::fmt("%.3f", pt.t) + ',' + detail::fmt("%.6f", pt.ta) + ',' +
               dfa_name(pt.dfa) + ',' + stage_name(pt.stage) + '\n';
    }
    return out;
}

struct ProfileSummary {
    double ta_min = 0.0;
    double ta_max = 0.0;
    double ta_final = 0.0;
    std::size_t points = 0;
};

inline ProfileSummary parse_profile_summary(const std::string& text) {
    ProfileSummary s;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "t_s,ta_c,dfa,stage") continue;
        std::istringstream row(line);
        std::string t, ta;
        if (!std::getline(row, t, ',') || !std::getline(row, ta, ','))
            throw ParseError("malformed profile row", line_no);
        const double v = std::stod(ta);
        if (s.points == 0) {
            s.ta_min = s.ta_max = v;
        } else {
            s.ta_min = std::min(s.ta_min, v);
            s.ta_max = std::max(s.ta_max, v);
        }
        s.ta_final = v;
        ++s.points;
    }
    return s;
}

inline nlohmann::json percentages_json(const std::map<SleepStage, double>& pct) {
    nlohmann::json j = nlohmann::json::object();
    for (SleepStage s : all_stages) {
        const auto it = pct.find(s);
        j[stage_name(s)] = it == pct.end() ? 0.0 : it->second;
    }
    return j;
}

inline std::map<SleepStage, double> parse_percentages_json(const nlohmann::json& j) {
    std::map<SleepStage, double> pct;
    for (SleepStage s : all_stages)
        pct[s] = j.value(stage_name(s), 0.0);
    return pct;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace somnotherm::io
