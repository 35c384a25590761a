#pragma once
// Independent reference implementations used by the tests. They share no
// code with the library beyond TimeSeries storage.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

namespace oracle {

inline double taper(double x) {
    return std::fabs(x) < 0.5 ? std::sqrt(30.0) / 4.0 * (1.0 - 4.0 * x * x) : 0.0;
}

inline double tricube(double x) {
    const double a = std::fabs(x);
    if (a >= 1.0) return 0.0;
    const double b = 1.0 - a * a * a;
    return b * b * b;
}

/// int_{-1}^{1} (1 - |t|^3)^6 dt = 2 sum_k C(6, k) (-1)^k / (3k + 1).
inline double tricube_sq_integral() {
    const double binom[7] = {1, 6, 15, 20, 15, 6, 1};
    double acc = 0.0;
    for (int k = 0; k <= 6; ++k) acc += (k % 2 == 0 ? 1.0 : -1.0) * binom[k] / (3.0 * k + 1.0);
    return 2.0 * acc;
}

/// 1-based access with zero padding.
inline double at(const std::vector<double>& x, std::int64_t i) {
    return (i < 1 || i > static_cast<std::int64_t>(x.size())) ? 0.0 : x[static_cast<std::size_t>(i - 1)];
}

/// Full double sum over i = 1..N of tau tau X_i X_{i+k} / n.
inline double autocov(const std::vector<double>& x, std::int64_t c, int k, int n) {
    double acc = 0.0;
    const auto N = static_cast<std::int64_t>(x.size());
    for (std::int64_t i = 1; i <= N; ++i)
        acc += taper(static_cast<double>(i - c) / n) * taper(static_cast<double>(i + k - c) / n) * at(x, i) *
               at(x, i + k);
    return acc / n;
}

/// (1/2 pi) sum_{k=-B}^{B} a(k/B) r(k) e^{ik theta}, complex form.
inline double lag_window_estimate(const std::vector<double>& x, std::int64_t c, double theta, int n, int B) {
    std::complex<double> acc = 0.0;
    for (int k = -B; k <= B; ++k) {
        const double r = autocov(x, c, k, n);
        acc += tricube(static_cast<double>(k) / B) * r * std::polar(1.0, k * theta);
    }
    return acc.real() / (2.0 * std::numbers::pi);
}

/// Tapered DFT summed over the whole series.
inline std::complex<double> stft(const std::vector<double>& x, std::int64_t c, double theta, int n) {
    std::complex<double> acc = 0.0;
    const auto N = static_cast<std::int64_t>(x.size());
    for (std::int64_t i = 1; i <= N; ++i)
        acc += taper(static_cast<double>(i - c) / n) * at(x, i) * std::polar(1.0, theta * static_cast<double>(i));
    return acc;
}

/// Philox4x32-10 known answer for counter = 0, key = 0 (Random123 test vector).
inline constexpr std::uint32_t kPhiloxZero[4] = {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u};
/// Counter = all 0xffffffff, key = all 0xffffffff.
inline constexpr std::uint32_t kPhiloxOnes[4] = {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu};

}  // namespace oracle
