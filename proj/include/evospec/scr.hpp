#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "evospec/grid.hpp"
#include "evospec/spectral.hpp"

namespace evospec {

/// Default number of Gaussian pseudo-samples.
inline constexpr int kDefaultMonteCarlo = 1000;

/// Relative floor for ratio denominators: |center| must exceed this times the
/// grid mean of |center|.
inline constexpr double kRelativeFloor = 1e-8;

/// Sorted Monte-Carlo draws of the normalised maximum squared deviation
///   max_grid |f_m - fbar|^2 / fbar^2
/// computed from i.i.d. standard normal pseudo-samples of length N.
struct BootstrapDistribution {
    std::vector<double> samples;  ///< ascending, all >= 0
    TimeFreqGrid grid;
    std::uint64_t seed = 0;
    int n_mc = 0;

    friend bool operator==(const BootstrapDistribution&, const BootstrapDistribution&) = default;
};

enum class ScrMethod { bootstrap_ratio, bootstrap_exp, gumbel_ratio };

std::string_view to_string(ScrMethod method) noexcept;
/// Parses "bootstrap-ratio", "bootstrap-exp" or "gumbel-ratio".
ScrMethod parse_scr_method(std::string_view text);

/// Simultaneous confidence region on a grid.
struct SCR {
    TimeFreqGrid grid;
    std::vector<double> lower;
    std::vector<double> upper;
    double gamma = 0.0;
    double alpha = 0.05;
    ScrMethod method = ScrMethod::bootstrap_ratio;
    SpectralSurface center;
};

/// Pseudo-sample m (0-based) draws from substream (seed, m), so the result is
/// bit-identical for every thread count.
BootstrapDistribution bootstrap_distribution(std::size_t N, const TimeFreqGrid& grid, int n_mc,
                                             std::uint64_t seed, unsigned threads = 1);

/// sqrt of the ceil((1 - alpha) N_MC)-th order statistic.
double critical_value(const BootstrapDistribution& dist, double alpha);

/// ratio form: [max(0, (1 - gamma) f), (1 + gamma) f];
/// exp form:   [exp(-gamma) f, exp(gamma) f], which needs f > 0 everywhere.
SCR build_scr(const SpectralSurface& center, double gamma, double alpha, ScrMethod method);

struct GumbelThreshold {
    double x = 0.0;          ///< Gumbel quantile -2 log(-log(1 - alpha))
    double threshold = 0.0;  ///< 2 log B + 2 log C - log(pi log B + pi log C) + x
    double gamma = 0.0;      ///< sqrt(threshold * (B/n) * int a^2)
};

/// Critical half-width for the relative deviation band from the Gumbel limit.
GumbelThreshold gumbel_critical_value(double alpha, int B, int C_n, int n);

/// max over the grid of |reference - center|^2 / center^2.
double max_relative_deviation(const SpectralSurface& reference, const SpectralSurface& center);

/// True iff lower <= surface <= upper at every grid point.
bool scr_contains(const SCR& scr, const SpectralSurface& surface);

/// Throws NumericError when some |value| is below kRelativeFloor times the
/// mean absolute value (or when all values vanish).
void check_ratio_floor(const std::vector<double>& values, std::string_view what);

}  // namespace evospec
