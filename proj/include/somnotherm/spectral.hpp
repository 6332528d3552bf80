#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "somnotherm/errors.hpp"
#include "somnotherm/fft.hpp"
#include "somnotherm/rr.hpp"

namespace somnotherm {

struct Band {
    double low = 0.0;   // Hz, inclusive
    double high = 0.0;  // Hz, exclusive
};

/// Standard HRV analysis bands. The HF peak search range extends past the HF
/// band's upper edge so that peak-frequency variability can exceed the REM
/// threshold at all.
struct FrequencyBands {
    Band vlf{0.0, 0.04};
    Band lf{0.04, 0.15};
    Band hf{0.15, 0.40};
    double hf_peak_search_upper = 1.0;  // Hz

    void validate(double nyquist) const {
        if (vlf.low != 0.0) throw ArgumentError("bands: VLF must start at 0 Hz");
        if (!(vlf.low < vlf.high && vlf.high == lf.low && lf.low < lf.high &&
              lf.high == hf.low && hf.low < hf.high))
            throw ArgumentError("bands: VLF/LF/HF must be contiguous and non-overlapping");
        if (!(hf.high <= hf_peak_search_upper && hf_peak_search_upper < nyquist))
            throw ArgumentError("bands: require hf.high <= hf_peak_search_upper < Nyquist");
    }
};

struct SpectralConfig {
    double window_len = 300.0;    // seconds per analysis window
    double window_stride = 300.0; // seconds between window starts
    double resample_rate = 4.0;   // Hz, uniform tachogram grid
    bool hann_taper = true;

    double nyquist() const { return resample_rate / 2.0; }

    void validate(const FrequencyBands& bands = {}) const {
        if (!(window_len >= 60.0)) throw ArgumentError("spectral config: window_len must be >= 60 s");
        if (!(window_stride > 0.0 && window_stride <= window_len))
            throw ArgumentError("spectral config: require 0 < stride <= window_len");
        if (!(resample_rate >= 2.0 * bands.hf_peak_search_upper))
            throw ArgumentError("spectral config: resample_rate must be >= 2 * hf_peak_search_upper");
        bands.validate(nyquist());
    }
};

/// One-sided power spectral density on a uniform frequency grid [0, Nyquist].
struct Spectrum {
    std::vector<double> freqs;  // Hz
    std::vector<double> psd;    // s^2/Hz

    double bin_width() const { return freqs.size() > 1 ? freqs[1] - freqs[0] : 0.0; }
    double nyquist() const { return freqs.empty() ? 0.0 : freqs.back(); }
};

/// Frequency-domain summary of one analysis window.
struct SpectralWindow {
    double t_start = 0.0;       // seconds
    double t_end = 0.0;         // seconds
    double vlf_power = 0.0;     // s^2
    double lf_power = 0.0;      // s^2
    double hf_power = 0.0;      // s^2
    double lf_hf_ratio = 0.0;
    double hf_peak_freq = 0.0;  // Hz
    double hf_peak_power = 0.0; // s^2/Hz
    std::size_t beat_count = 0;
};

namespace detail {

/// Natural cubic spline through strictly increasing knots; evaluation clamps
/// to the knot range (constant extrapolation).
class CubicSpline {
public:
    CubicSpline(const std::vector<double>& x, const std::vector<double>& y) : x_(x), y_(y) {
        const std::size_t n = x.size();
        if (n < 2) throw InsufficientDataError("spline needs at least 2 points");
        m_.assign(n, 0.0);
        if (n == 2) return;
        // Tridiagonal system for interior second derivatives (natural ends).
        std::vector<double> diag(n, 0.0), rhs(n, 0.0), sub(n, 0.0), sup(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = x[i] - x[i - 1];
            const double h1 = x[i + 1] - x[i];
            sub[i] = h0;
            diag[i] = 2.0 * (h0 + h1);
            sup[i] = h1;
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
        }
        for (std::size_t i = 2; i + 1 < n; ++i) {
            const double w = sub[i] / diag[i - 1];
            diag[i] -= w * sup[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = (rhs[i] - sup[i] * (i + 2 < n ? m_[i + 1] : 0.0)) / diag[i];
            if (i == 1) break;
        }
    }

    double operator()(double t) const {
        if (t <= x_.front()) return y_.front();
        if (t >= x_.back()) return y_.back();
        const auto it = std::upper_bound(x_.begin(), x_.end(), t);
        const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
        const double h = x_[i + 1] - x_[i];
        const double a = (x_[i + 1] - t) / h;
        const double b = (t - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::vector<double> x_, y_, m_;
};

/// Remove the least-squares line (and hence the mean) in place.
inline void detrend_linear(std::vector<double>& v) {
    const std::size_t n = v.size();
    if (n == 0) return;
    if (n == 1) {
        v[0] = 0.0;
        return;
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += v[i];
        sxx += x * x;
        sxy += x * v[i];
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    const double slope = denom != 0.0 ? (nn * sxy - sx * sy) / denom : 0.0;
    const double icept = (sy - slope * sx) / nn;
    for (std::size_t i = 0; i < n; ++i) v[i] -= icept + slope * static_cast<double>(i);
}

/// Beats with timestamps in [t0 - pad, t1 + pad], as spline knots.
inline void slice_knots(const RRSeries& s, double t0, double t1, double pad,
                        std::vector<double>& ts, std::vector<double>& ys) {
    const auto lo = std::lower_bound(s.timestamps.begin(), s.timestamps.end(), t0 - pad);
    const auto hi = std::upper_bound(s.timestamps.begin(), s.timestamps.end(), t1 + pad);
    ts.assign(lo, hi);
    ys.assign(s.intervals.begin() + (lo - s.timestamps.begin()),
              s.intervals.begin() + (hi - s.timestamps.begin()));
}

}  // namespace detail

/// Resample the tachogram segment [t_start, t_start + n/fs) onto a uniform
/// grid by natural cubic spline interpolation of the (timestamp, interval)
/// knots, then subtract mean and linear trend.
inline std::vector<double> resample_segment(const RRSeries& series, double t_start,
                                            std::size_t n_samples, double fs) {
    if (series.size() < 2) throw InsufficientDataError("resample: need at least 2 beats");
    std::vector<double> ts, ys;
    detail::slice_knots(series, t_start, t_start + static_cast<double>(n_samples) / fs, 5.0, ts, ys);
    if (ts.size() < 2) throw InsufficientDataError("resample: segment holds fewer than 2 beats");
    detail::CubicSpline spline(ts, ys);
    std::vector<double> out(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i)
        out[i] = spline(t_start + static_cast<double>(i) / fs);
    detail::detrend_linear(out);
    return out;
}

/// Full-span variant: grid from t = 0 to the last beat.
inline std::vector<double> resample_tachogram(const RRSeries& series, const SpectralConfig& cfg) {
    cfg.validate();
    if (series.size() < 2) throw InsufficientDataError("resample: need at least 2 beats");
    if (series.duration() < cfg.window_len)
        throw InsufficientDataError("resample: recording shorter than one window");
    const auto n = static_cast<std::size_t>(series.duration() * cfg.resample_rate);
    return resample_segment(series, 0.0, n, cfg.resample_rate);
}

/// Single tapered periodogram of an evenly sampled series. The PSD is
/// one-sided and power-normalized (divided by the taper's energy), so its
/// integral over [0, Nyquist] estimates the variance of the input.
inline Spectrum periodogram(const std::vector<double>& x, double fs, bool hann_taper = true) {
    const std::size_t n = x.size();
    if (n < 2) throw InsufficientDataError("periodogram: need at least 2 samples");
    std::vector<double> w(n, 1.0);
    if (hann_taper)
        for (std::size_t i = 0; i < n; ++i)
            w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                         static_cast<double>(n - 1)));
    double sumw2 = 0.0;
    std::vector<double> xw(n);
    for (std::size_t i = 0; i < n; ++i) {
        xw[i] = x[i] * w[i];
        sumw2 += w[i] * w[i];
    }
    const auto spec = fft::forward_real(xw);

    const std::size_t half = n / 2;  // bin `half` is Nyquist when n is even
    Spectrum out;
    out.freqs.resize(half + 1);
    out.psd.resize(half + 1);
    const double df = fs / static_cast<double>(n);
    const double norm = 1.0 / (fs * sumw2);
    for (std::size_t k = 0; k <= half; ++k) {
        out.freqs[k] = df * static_cast<double>(k);
        const bool single = k == 0 || (n % 2 == 0 && k == half);
        out.psd[k] = (single ? 1.0 : 2.0) * std::norm(spec[k]) * norm;
    }
    return out;
}

/// Integral of the PSD over [lo, hi), treating the PSD as piecewise linear
/// between bins (bin straddling allocated proportionally). Splitting a range
/// at interior points is exactly additive.
inline double band_power(const Spectrum& spec, double lo, double hi) {
    if (!(lo >= 0.0 && lo < hi)) throw ArgumentError("band_power: require 0 <= lo < hi");
    if (hi > spec.nyquist() + 1e-12) throw ArgumentError("band_power: band exceeds Nyquist");
    hi = std::min(hi, spec.nyquist());
    if (spec.freqs.size() < 2) return 0.0;
    const double df = spec.bin_width();
    double total = 0.0;
    const std::size_t kmax = spec.freqs.size() - 1;
    const auto interp = [&](double f, std::size_t k) {
        const double frac = (f - spec.freqs[k]) / df;
        return spec.psd[k] + frac * (spec.psd[k + 1] - spec.psd[k]);
    };
    for (std::size_t k = 0; k < kmax; ++k) {
        const double f0 = std::max(lo, spec.freqs[k]);
        const double f1 = std::min(hi, spec.freqs[k + 1]);
        if (f1 <= f0) continue;
        total += 0.5 * (interp(f0, k) + interp(f1, k)) * (f1 - f0);
    }
    return total;
}

inline double total_power(const Spectrum& spec) {
    return spec.freqs.size() < 2 ? 0.0 : band_power(spec, 0.0, spec.nyquist());
}

namespace detail {

inline double lf_hf_ratio(double lf, double hf) {
    if (hf > 0.0) return lf / hf;
    return lf > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace detail

/// Analyze one window starting at t_start (duration = cfg.window_len):
/// resample -> periodogram -> band powers + HF peak.
inline SpectralWindow analyze_window(const RRSeries& series, double t_start,
                                     const SpectralConfig& cfg = {},
                                     const FrequencyBands& bands = {}) {
    cfg.validate(bands);
    const auto n = static_cast<std::size_t>(std::llround(cfg.window_len * cfg.resample_rate));
    const double t_end = t_start + cfg.window_len;

    SpectralWindow win;
    win.t_start = t_start;
    win.t_end = t_end;
    {
        const auto lo = std::lower_bound(series.timestamps.begin(), series.timestamps.end(), t_start);
        const auto hi = std::lower_bound(series.timestamps.begin(), series.timestamps.end(), t_end);
        win.beat_count = static_cast<std::size_t>(hi - lo);
    }
    if (win.beat_count < 8)
        throw InsufficientDataError("analyze_window: fewer than 8 beats in window");

    const auto even = resample_segment(series, t_start, n, cfg.resample_rate);
    const auto spec = periodogram(even, cfg.resample_rate, cfg.hann_taper);

    win.vlf_power = band_power(spec, bands.vlf.low, bands.vlf.high);
    win.lf_power = band_power(spec, bands.lf.low, bands.lf.high);
    win.hf_power = band_power(spec, bands.hf.low, bands.hf.high);
    win.lf_hf_ratio = detail::lf_hf_ratio(win.lf_power, win.hf_power);

    win.hf_peak_freq = bands.hf.low;
    win.hf_peak_power = 0.0;
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
        const double f = spec.freqs[k];
        if (f < bands.hf.low || f > bands.hf_peak_search_upper) continue;
        if (spec.psd[k] > win.hf_peak_power) {
            win.hf_peak_power = spec.psd[k];
            win.hf_peak_freq = f;
        }
    }
    return win;
}

/// Consecutive windows covering the recording from t = 0; the trailing
/// partial window is discarded. Windows are ordered by start time.
inline std::vector<SpectralWindow> windowize(const RRSeries& series,
                                             const SpectralConfig& cfg = {},
                                             const FrequencyBands& bands = {}) {
    cfg.validate(bands);
    const double span = series.duration();
    if (span + 1e-9 < cfg.window_len)
        throw InsufficientDataError("windowize: recording shorter than one window");
    const auto count = static_cast<std::size_t>(
        std::floor((span - cfg.window_len) / cfg.window_stride + 1e-9)) + 1;
    std::vector<SpectralWindow> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        out.push_back(analyze_window(series, static_cast<double>(k) * cfg.window_stride, cfg, bands));
    return out;
}

}  // namespace somnotherm
