#include "evospec/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "evospec/error.hpp"

namespace evospec {

namespace {

/// Trapezoid integral of one surface row over the grid frequencies.
double row_integral(const SpectralSurface& s, std::size_t iu) {
    const auto& theta = s.grid.theta;
    double acc = 0.0;
    for (std::size_t it = 1; it < theta.size(); ++it)
        acc += 0.5 * (s(iu, it - 1) + s(iu, it)) * (theta[it] - theta[it - 1]);
    return acc;
}

double frequency_span(const SpectralSurface& s) {
    const double span = s.grid.theta.back() - s.grid.theta.front();
    if (!(span > 0.0)) throw std::invalid_argument("frequency integrals need at least two distinct frequencies");
    return span;
}

std::vector<double> column_means(const SpectralSurface& s) {
    std::vector<double> m(s.cols(), 0.0);
    for (std::size_t iu = 0; iu < s.rows(); ++iu)
        for (std::size_t it = 0; it < s.cols(); ++it) m[it] += s(iu, it);
    for (double& v : m) v /= static_cast<double>(s.rows());
    return m;
}

}  // namespace

SpectralSurface null_white_noise(const SpectralSurface& estimate) {
    const double span = frequency_span(estimate);
    SpectralSurface out(estimate.grid);
    for (std::size_t iu = 0; iu < estimate.rows(); ++iu) {
        const double g = row_integral(estimate, iu) / span;
        for (std::size_t it = 0; it < estimate.cols(); ++it) out(iu, it) = g;
    }
    return out;
}

SpectralSurface null_stationary(const SpectralSurface& estimate) {
    const auto h = column_means(estimate);
    SpectralSurface out(estimate.grid);
    for (std::size_t iu = 0; iu < estimate.rows(); ++iu)
        for (std::size_t it = 0; it < estimate.cols(); ++it) out(iu, it) = h[it];
    return out;
}

SpectralSurface null_separable(const SpectralSurface& estimate) {
    frequency_span(estimate);
    // time_marginal(u) = int f(u, .) dtheta, freq_marginal(theta) = int f(., theta) du,
    // c0 = double integral; the null is time_marginal * freq_marginal / c0.
    std::vector<double> time_marginal(estimate.rows());
    double c0 = 0.0;
    double scale = 0.0;
    for (std::size_t iu = 0; iu < estimate.rows(); ++iu) {
        time_marginal[iu] = row_integral(estimate, iu);
        c0 += time_marginal[iu];
    }
    c0 /= static_cast<double>(estimate.rows());
    for (double v : estimate.values) scale += std::fabs(v);
    scale /= static_cast<double>(estimate.values.size());
    if (!(std::fabs(c0) > 1e-12 * scale * frequency_span(estimate)))
        throw NumericError("separable null undefined: the integrated spectrum is zero");
    const auto freq_marginal = column_means(estimate);
    SpectralSurface out(estimate.grid);
    for (std::size_t iu = 0; iu < estimate.rows(); ++iu)
        for (std::size_t it = 0; it < estimate.cols(); ++it)
            out(iu, it) = time_marginal[iu] * freq_marginal[it] / c0;
    return out;
}

std::string_view to_string(NullKind kind) noexcept {
    switch (kind) {
        case NullKind::white_noise: return "white-noise";
        case NullKind::stationary: return "stationarity";
        case NullKind::separable: return "separability";
    }
    return "unknown";
}

NullKind parse_null_kind(std::string_view text) {
    if (text == "white-noise") return NullKind::white_noise;
    if (text == "stationarity") return NullKind::stationary;
    if (text == "separability") return NullKind::separable;
    throw std::invalid_argument("unknown test '" + std::string(text) + "'");
}

NullBuilder null_builder(NullKind kind) {
    switch (kind) {
        case NullKind::white_noise: return null_white_noise;
        case NullKind::stationary: return null_stationary;
        case NullKind::separable: return null_separable;
    }
    throw std::invalid_argument("unknown null kind");
}

TestResult evaluate_test(const SpectralSurface& estimate, SpectralSurface null_surface,
                         const BootstrapDistribution& dist, double alpha) {
    if (!(dist.grid == estimate.grid))
        throw std::invalid_argument("bootstrap distribution was computed for a different grid");
    TestResult result;
    result.statistic = max_relative_deviation(null_surface, estimate);
    result.gamma_alpha = critical_value(dist, alpha);
    result.reject = result.statistic > result.gamma_alpha * result.gamma_alpha;
    // samples are sorted: count those >= statistic
    const auto first = std::lower_bound(dist.samples.begin(), dist.samples.end(), result.statistic);
    const auto exceed = static_cast<double>(dist.samples.end() - first);
    result.p_value = (1.0 + exceed) / (static_cast<double>(dist.samples.size()) + 1.0);
    result.estimate = estimate;
    result.null_surface = std::move(null_surface);
    result.config.n = estimate.n();
    result.config.B = estimate.B();
    result.config.n_mc = dist.n_mc;
    result.config.seed = dist.seed;
    result.config.alpha = alpha;
    return result;
}

TestResult run_test(const TimeSeries& series, const NullBuilder& null_builder,
                    const TestConfig& config) {
    const auto grid = build_grid(series.size(), config.n, config.B);
    auto estimate = spectral_surface(series, grid, {config.threads});
    auto null_surface = null_builder(estimate);
    const auto dist = bootstrap_distribution(series.size(), grid, config.n_mc, config.seed, config.threads);
    auto result = evaluate_test(estimate, std::move(null_surface), dist, config.alpha);
    result.config.threads = config.threads;
    return result;
}

TestResult validate_model_spectrum(const TimeSeries& series, const SpectralSurface& model_surface,
                                   const TestConfig& config) {
    const auto grid = build_grid(series.size(), config.n, config.B);
    if (!(model_surface.grid == grid))
        throw std::invalid_argument("model surface is not defined on the inference grid");
    return run_test(series, [&](const SpectralSurface&) { return model_surface; }, config);
}

}  // namespace evospec
