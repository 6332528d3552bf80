#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "somnotherm/errors.hpp"

namespace somnotherm {

/// Timestamped sequence of inter-beat (RR) intervals, the sole physiological
/// input of the pipeline. timestamps[i] is the cumulative sum of
/// intervals[0..=i], so the first beat lands at t = intervals[0] and the
/// recording implicitly starts at t = 0.
struct RRSeries {
    std::vector<double> intervals;   // seconds per beat-to-beat gap, all > 0
    std::vector<double> timestamps;  // seconds from recording start
    std::string subject_id;

    std::size_t size() const { return intervals.size(); }
    bool empty() const { return intervals.empty(); }
    double duration() const { return timestamps.empty() ? 0.0 : timestamps.back(); }
};

struct IngestConfig {
    double min_rr = 0.3;             // seconds
    double max_rr = 2.0;             // seconds
    double max_relative_jump = 0.2;  // fraction vs previous accepted beat

    void validate() const {
        if (!(0.0 < min_rr && min_rr < max_rr))
            throw ArgumentError("ingest config: require 0 < min_rr < max_rr");
        if (!(0.0 < max_relative_jump && max_relative_jump < 1.0))
            throw ArgumentError("ingest config: require 0 < max_relative_jump < 1");
    }
};

namespace detail {

// Long-double accumulation keeps the cumulative-sum invariant well inside the
// 1e-9 s tolerance over a full night of beats.
inline std::vector<double> cumulative_timestamps(const std::vector<double>& intervals) {
    std::vector<double> ts;
    ts.reserve(intervals.size());
    long double acc = 0.0L;
    for (double rr : intervals) {
        acc += static_cast<long double>(rr);
        ts.push_back(static_cast<double>(acc));
    }
    return ts;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline bool parse_number(std::string_view tok, double& out) {
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace detail

inline RRSeries make_rr_series(std::vector<double> intervals, std::string subject_id = {}) {
    for (std::size_t i = 0; i < intervals.size(); ++i)
        if (!(intervals[i] > 0.0))
            throw ValidationError("nonpositive RR interval", i + 1);
    RRSeries s;
    s.timestamps = detail::cumulative_timestamps(intervals);
    s.intervals = std::move(intervals);
    s.subject_id = std::move(subject_id);
    return s;
}

inline void validate(const RRSeries& s) {
    if (s.intervals.size() != s.timestamps.size())
        throw ValidationError("interval/timestamp length mismatch");
    long double acc = 0.0L;
    double prev = -1.0;
    for (std::size_t i = 0; i < s.intervals.size(); ++i) {
        if (!(s.intervals[i] > 0.0)) throw ValidationError("nonpositive RR interval", i + 1);
        if (!(s.timestamps[i] > prev)) throw ValidationError("timestamps not strictly increasing", i + 1);
        acc += static_cast<long double>(s.intervals[i]);
        if (std::fabs(static_cast<double>(acc) - s.timestamps[i]) > 1e-9)
            throw ValidationError("timestamp is not the cumulative interval sum", i + 1);
        prev = s.timestamps[i];
    }
}

/// Parse an RR recording from text. Two layouts are accepted:
///   - one RR value per line; '#' comment lines and blank lines are skipped;
///   - the canonical CSV form written by serialize_rr ("t_s,rr_s" header,
///     one beat per row; the rr_s column is used).
/// Values are read as seconds when their median is < 10, otherwise as
/// milliseconds and divided by 1000.
inline RRSeries parse_rr(std::string_view text, std::string subject_id = {}) {
    std::vector<double> values;
    std::vector<std::size_t> lines;
    bool csv = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool saw_data = false;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        std::string_view tok = detail::trim(raw);
        if (tok.empty() || tok.front() == '#') continue;

        if (!saw_data) {
            saw_data = true;
            if (tok == "t_s,rr_s") {  // canonical CSV header
                csv = true;
                continue;
            }
            if (tok.find(',') != std::string_view::npos) csv = true;
        }
        if (csv) {
            const std::size_t comma = tok.find(',');
            if (comma == std::string_view::npos)
                throw ParseError("expected 't_s,rr_s' row", line_no);
            tok = detail::trim(tok.substr(comma + 1));
        }
        double v = 0.0;
        if (!detail::parse_number(tok, v))
            throw ParseError("unexpected token '" + std::string(tok) + "'", line_no);
        values.push_back(v);
        lines.push_back(line_no);
    }
    if (values.empty()) throw EmptyRecordingError("empty recording: no RR samples found");

    std::vector<double> sorted = values;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const bool milliseconds = sorted[sorted.size() / 2] >= 10.0;

    RRSeries s;
    s.subject_id = std::move(subject_id);
    s.intervals.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double rr = milliseconds ? values[i] / 1000.0 : values[i];
        if (!(rr > 0.0)) throw ValidationError("nonpositive RR interval", lines[i]);
        s.intervals.push_back(rr);
    }
    s.timestamps = detail::cumulative_timestamps(s.intervals);
    return s;
}

/// Canonical serialized form: CSV "t_s,rr_s", one row per beat, 6 decimals.
inline std::string serialize_rr(const RRSeries& s) {
    std::string out = "t_s,rr_s\n";
    char buf[64];
    for (std::size_t i = 0; i < s.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f,%.6f\n", s.timestamps[i], s.intervals[i]);
        out += buf;
    }
    return out;
}

struct FilterResult {
    RRSeries series;
    std::size_t replaced = 0;
};

/// Replace artifact beats by linear interpolation between the nearest
/// accepted neighbors. A beat is an artifact when it falls outside
/// [min_rr, max_rr] or deviates from the previously accepted beat by more
/// than max_relative_jump (fractionally). The beat count is preserved and
/// timestamps are recomputed. Throws DataQualityError when more than 20% of
/// beats needed replacement.
inline FilterResult filter_artifacts(const RRSeries& series, const IngestConfig& cfg = {}) {
    cfg.validate();
    const std::size_t n = series.size();
    std::vector<bool> bad(n, false);
    double prev_ok = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double rr = series.intervals[i];
        bool b = rr < cfg.min_rr || rr > cfg.max_rr;
        if (!b && prev_ok > 0.0 && std::fabs(rr - prev_ok) / prev_ok > cfg.max_relative_jump)
            b = true;
        bad[i] = b;
        if (!b) prev_ok = rr;
    }

    std::vector<double> fixed = series.intervals;
    std::size_t replaced = 0;
    std::size_t i = 0;
    while (i < n) {
        if (!bad[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && bad[j]) ++j;  // bad run [i, j)
        const bool has_left = i > 0;
        const bool has_right = j < n;
        for (std::size_t k = i; k < j; ++k, ++replaced) {
            if (has_left && has_right) {
                const double a = fixed[i - 1], b = series.intervals[j];
                const double f = static_cast<double>(k - i + 1) / static_cast<double>(j - i + 1);
                fixed[k] = a + f * (b - a);
            } else if (has_left) {
                fixed[k] = fixed[i - 1];
            } else if (has_right) {
                fixed[k] = series.intervals[j];
            } else {
                throw DataQualityError("recording unusable: no valid beats");
            }
        }
        i = j;
    }

    if (n > 0 && static_cast<double>(replaced) > 0.2 * static_cast<double>(n))
        throw DataQualityError("recording unusable: " + std::to_string(replaced) + " of " +
                               std::to_string(n) + " beats replaced (over 20%)");

    FilterResult out;
    out.series.intervals = std::move(fixed);
    out.series.timestamps = detail::cumulative_timestamps(out.series.intervals);
    out.series.subject_id = series.subject_id;
    out.replaced = replaced;
    return out;
}

}  // namespace somnotherm
