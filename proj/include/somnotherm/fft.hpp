#pragma once

#include <bit>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <vector>

#include "somnotherm/errors.hpp"

namespace somnotherm::fft {

using cvec = std::vector<std::complex<double>>;

namespace detail {

inline void transform_pow2(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang =
            (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = a[i + k];
                const auto v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= scale;
    }
}

// Chirp exp(+-i*pi*k^2/n) with k^2 reduced mod 2n to keep the phase argument
// small; k^2 fits in 64 bits for any realistic transform size.
inline std::complex<double> chirp(std::uint64_t k, std::size_t n, double sign) {
    const std::uint64_t q = (k * k) % (2 * static_cast<std::uint64_t>(n));
    const double phase =
        sign * std::numbers::pi * static_cast<double>(q) / static_cast<double>(n);
    return {std::cos(phase), std::sin(phase)};
}

// Bluestein's algorithm: arbitrary-length DFT via one power-of-two convolution.
inline cvec transform_bluestein(const cvec& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    cvec a(m, {0.0, 0.0}), b(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const auto c = chirp(k, n, sign);
        a[k] = x[k] * c;
        const auto cc = std::conj(c);
        b[k] = cc;
        if (k > 0) b[m - k] = cc;
    }
    transform_pow2(a, false);
    transform_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    transform_pow2(a, true);

    cvec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k, n, sign);
    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& v : out) v *= scale;
    }
    return out;
}

}  // namespace detail

/// DFT of a complex sequence, any length >= 1. X_k = sum x_j e^{-2pi i jk/n};
/// the inverse includes the 1/n factor.
inline cvec transform(cvec x, bool inverse = false) {
    if (x.empty()) throw ArgumentError("fft: empty input");
    if (std::has_single_bit(x.size())) {
        detail::transform_pow2(x, inverse);
        return x;
    }
    return detail::transform_bluestein(x, inverse);
}

inline cvec forward_real(const std::vector<double>& x) {
    cvec c(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) c[i] = {x[i], 0.0};
    return transform(std::move(c), false);
}

}  // namespace somnotherm::fft
