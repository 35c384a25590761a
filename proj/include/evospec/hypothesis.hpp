#pragma once

#include <cstdint>
#include <functional>
#include <string_view>

#include "evospec/scr.hpp"
#include "evospec/series.hpp"
#include "evospec/spectral.hpp"

namespace evospec {

/// Time-varying white noise: g(u) = (1/pi) int_0^pi f(u, theta) dtheta,
/// trapezoid rule over the grid frequencies. Constant in theta.
SpectralSurface null_white_noise(const SpectralSurface& estimate);

/// Stationarity: h(theta) = int_0^1 f(u, theta) du as the equal-weight mean
/// over the time points. Constant in u.
SpectralSurface null_stationary(const SpectralSurface& estimate);

/// Time-frequency separability: C0 g(u) h(theta) with the integrals
/// discretised as above. The result has rank one.
SpectralSurface null_separable(const SpectralSurface& estimate);

enum class NullKind { white_noise, stationary, separable };

std::string_view to_string(NullKind kind) noexcept;
/// Parses "white-noise", "stationarity" or "separability".
NullKind parse_null_kind(std::string_view text);

using NullBuilder = std::function<SpectralSurface(const SpectralSurface&)>;
NullBuilder null_builder(NullKind kind);

struct TestConfig {
    int n = 0;
    int B = 0;
    int n_mc = kDefaultMonteCarlo;
    double alpha = 0.05;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

struct TestResult {
    double statistic = 0.0;    ///< max squared relative deviation of the null from the estimate
    double p_value = 1.0;      ///< (1 + #{bootstrap >= statistic}) / (N_MC + 1)
    double gamma_alpha = 0.0;  ///< critical relative half-width at level alpha
    bool reject = false;       ///< statistic > gamma_alpha^2
    SpectralSurface estimate;
    SpectralSurface null_surface;
    TestConfig config;
};

/// Core decision given an estimate, a null surface on the same grid and a
/// bootstrap distribution for that grid.
TestResult evaluate_test(const SpectralSurface& estimate, SpectralSurface null_surface,
                         const BootstrapDistribution& dist, double alpha);

/// Builds the dense grid for (n, B), estimates, forms the null with
/// `null_builder` and calibrates with the Gaussian bootstrap.
TestResult run_test(const TimeSeries& series, const NullBuilder& null_builder,
                    const TestConfig& config);

/// As run_test with an externally supplied model spectrum, which must live on
/// the dense grid for (N, n, B).
TestResult validate_model_spectrum(const TimeSeries& series, const SpectralSurface& model_surface,
                                   const TestConfig& config);

}  // namespace evospec
