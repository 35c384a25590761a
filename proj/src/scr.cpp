#include "evospec/scr.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "evospec/error.hpp"
#include "evospec/kernels.hpp"
#include "evospec/parallel.hpp"
#include "evospec/rng.hpp"

namespace evospec {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(ScrMethod method) noexcept {
    switch (method) {
        case ScrMethod::bootstrap_ratio: return "bootstrap-ratio";
        case ScrMethod::bootstrap_exp: return "bootstrap-exp";
        case ScrMethod::gumbel_ratio: return "gumbel-ratio";
    }
    return "unknown";
}

ScrMethod parse_scr_method(std::string_view text) {
    if (text == "bootstrap-ratio") return ScrMethod::bootstrap_ratio;
    if (text == "bootstrap-exp") return ScrMethod::bootstrap_exp;
    if (text == "gumbel-ratio") return ScrMethod::gumbel_ratio;
    throw std::invalid_argument("unknown SCR method '" + std::string(text) + "'");
}

void check_ratio_floor(const std::vector<double>& values, std::string_view what) {
    double mean_abs = 0.0;
    for (double v : values) mean_abs += std::fabs(v);
    mean_abs /= static_cast<double>(values.size());
    const double floor = kRelativeFloor * mean_abs;
    if (!(mean_abs > 0.0))
        throw NumericError(std::string(what) + " vanishes on the whole grid");
    for (double v : values) {
        if (!(std::fabs(v) >= floor))
            throw NumericError(std::string(what) +
                               " is numerically zero at some grid point; ratio statistic undefined");
    }
}

BootstrapDistribution bootstrap_distribution(std::size_t N, const TimeFreqGrid& grid, int n_mc,
                                             std::uint64_t seed, unsigned threads) {
    if (n_mc < 100) throw std::invalid_argument("bootstrap needs at least 100 pseudo-samples");
    if (grid.N != N)
        throw std::invalid_argument("grid was built for N=" + std::to_string(grid.N) +
                                    ", bootstrap requested for N=" + std::to_string(N));
    const std::size_t cells = grid.size();
    const auto reps = static_cast<std::size_t>(n_mc);
    std::vector<double> draws(reps * cells);

    parallel_for(reps, threads, [&](std::size_t m) {
        NormalStream rng(seed, m);
        std::vector<double> eps(N);
        rng.fill(eps);
        const auto surface = spectral_surface(TimeSeries(std::move(eps)), grid);
        std::copy(surface.values.begin(), surface.values.end(), draws.begin() + m * cells);
    });

    std::vector<double> mean(cells, 0.0);
    for (std::size_t m = 0; m < reps; ++m)
        for (std::size_t g = 0; g < cells; ++g) mean[g] += draws[m * cells + g];
    for (double& v : mean) v /= static_cast<double>(reps);
    check_ratio_floor(mean, "bootstrap mean spectrum");

    BootstrapDistribution dist{std::vector<double>(reps), grid, seed, n_mc};
    for (std::size_t m = 0; m < reps; ++m) {
        double worst = 0.0;
        for (std::size_t g = 0; g < cells; ++g) {
            const double d = (draws[m * cells + g] - mean[g]) / mean[g];
            worst = std::max(worst, d * d);
        }
        dist.samples[m] = worst;
    }
    std::sort(dist.samples.begin(), dist.samples.end());
    return dist;
}

double critical_value(const BootstrapDistribution& dist, double alpha) {
    check_alpha(alpha);
    if (dist.samples.empty()) throw std::invalid_argument("empty bootstrap distribution");
    const auto count = static_cast<double>(dist.samples.size());
    // Small slack keeps e.g. 0.95 * 1000 from rounding up to 951.
    auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * count - 1e-9));
    k = std::clamp<std::size_t>(k, 1, dist.samples.size());
    return std::sqrt(dist.samples[k - 1]);
}

SCR build_scr(const SpectralSurface& center, double gamma, double alpha, ScrMethod method) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("critical value gamma must be finite and non-negative");
    check_alpha(alpha);
    SCR scr;
    scr.grid = center.grid;
    scr.gamma = gamma;
    scr.alpha = alpha;
    scr.method = method;
    scr.center = center;
    scr.lower.resize(center.values.size());
    scr.upper.resize(center.values.size());
    if (method == ScrMethod::bootstrap_exp) {
        for (double f : center.values)
            if (!(f > 0.0))
                throw NumericError(
                    "exponential band needs a positive estimate everywhere; use the ratio form");
        const double lo = std::exp(-gamma);
        const double hi = std::exp(gamma);
        for (std::size_t g = 0; g < center.values.size(); ++g) {
            scr.lower[g] = lo * center.values[g];
            scr.upper[g] = hi * center.values[g];
        }
    } else {
        for (std::size_t g = 0; g < center.values.size(); ++g) {
            const double f = center.values[g];
            scr.lower[g] = std::max(0.0, (1.0 - gamma) * f);
            scr.upper[g] = (1.0 + gamma) * f;
        }
    }
    return scr;
}

GumbelThreshold gumbel_critical_value(double alpha, int B, int C_n, int n) {
    check_alpha(alpha);
    if (B < 3) throw std::invalid_argument("Gumbel threshold needs B_n >= 3");
    if (C_n < 2) throw std::invalid_argument("Gumbel threshold needs C_n >= 2");
    if (n <= B) throw std::invalid_argument("Gumbel threshold needs n > B_n");
    GumbelThreshold out;
    out.x = -2.0 * std::log(-std::log1p(-alpha));
    const double lb = std::log(static_cast<double>(B));
    const double lc = std::log(static_cast<double>(C_n));
    out.threshold = 2.0 * lb + 2.0 * lc - std::log(std::numbers::pi * lb + std::numbers::pi * lc) + out.x;
    if (!(out.threshold > 0.0))
        throw NumericError("Gumbel threshold is not positive; grid too small for the asymptotics");
    out.gamma = std::sqrt(out.threshold * (static_cast<double>(B) / n) *
                          kernels::lag_window_sq_integral());
    return out;
}

double max_relative_deviation(const SpectralSurface& reference, const SpectralSurface& center) {
    if (!(reference.grid == center.grid))
        throw std::invalid_argument("surfaces are defined on different grids");
    check_ratio_floor(center.values, "spectral estimate");
    double worst = 0.0;
    for (std::size_t g = 0; g < center.values.size(); ++g) {
        const double d = (reference.values[g] - center.values[g]) / center.values[g];
        worst = std::max(worst, d * d);
    }
    return worst;
}

bool scr_contains(const SCR& scr, const SpectralSurface& surface) {
    if (!(scr.grid == surface.grid))
        throw std::invalid_argument("surface and confidence region use different grids");
    for (std::size_t g = 0; g < surface.values.size(); ++g) {
        const double v = surface.values[g];
        if (!(scr.lower[g] <= v && v <= scr.upper[g])) return false;
    }
    return true;
}

}  // namespace evospec
