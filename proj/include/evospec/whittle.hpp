#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "evospec/grid.hpp"
#include "evospec/series.hpp"
#include "evospec/spectral.hpp"

namespace evospec {

/// Coefficients of sum_{i=0}^p a_i X_{t-i} = sigma sum_{j=0}^q b_j e_{t-j}
/// with a_0 = b_0 = 1; `ar` holds a_1..a_p and `ma` holds b_1..b_q.
struct ArmaCoefficients {
    std::vector<double> ar;
    std::vector<double> ma;
};

/// Spectrum of the unit-variance model, |B(e^{i theta})|^2 / (2 pi |A(e^{i theta})|^2).
/// Throws NumericError when |A| < 1e-10 (unit root on the circle).
double arma_unit_spectrum(const ArmaCoefficients& coeffs, double theta);

/// Partial autocorrelations (each in (-1, 1)) to polynomial coefficients
/// c_1..c_p of 1 + sum c_i z^i; the result has all roots outside the unit circle.
std::vector<double> pacf_to_polynomial(std::span<const double> pacf);
/// Inverse of pacf_to_polynomial. Some |value| >= 1 means the polynomial is not stable.
std::vector<double> polynomial_to_pacf(std::span<const double> coeffs);
/// All roots of 1 + sum c_i z^i strictly outside the unit circle.
bool is_stable_polynomial(std::span<const double> coeffs);

/// Unconstrained parameters (p AR then q MA) to coefficients through
/// partial autocorrelations tanh(x). Every decode is causal and invertible.
ArmaCoefficients decode_parameters(std::span<const double> params, int p, int q);
/// Inverse of decode_parameters; throws std::invalid_argument for a
/// non-causal or non-invertible input.
std::vector<double> encode_parameters(const ArmaCoefficients& coeffs);

/// Fourier frequencies 2 pi k / window, k = 1..floor((window - 1)/2).
std::vector<double> fourier_frequencies(int window);

/// Tapered local periodogram of the window centred at floor(uN) at the
/// Fourier frequencies of that window.
std::vector<double> local_fourier_periodogram(const TimeSeries& series, double u, int window);

/// sum_k [log f(theta_k) + I(theta_k) / f(theta_k)] with f = sigma2 * unit spectrum.
double whittle_objective(std::span<const double> periodogram, int window,
                         const ArmaCoefficients& coeffs, double sigma2);

struct ProfiledWhittle {
    double objective = 0.0;
    double sigma2 = 0.0;
};

/// Whittle objective with sigma^2 replaced by its minimiser mean(I / f_unit).
ProfiledWhittle profiled_whittle(std::span<const double> periodogram, int window,
                                 const ArmaCoefficients& coeffs);

/// Profiled objective as a function of unconstrained parameters. Returns
/// +infinity at numerically infeasible points.
double local_whittle_objective(std::span<const double> params, std::span<const double> periodogram,
                               int window, int p, int q);

/// Time-varying ARMA(p, q) model with coefficients stored per u_grid point and
/// linearly interpolated in between.
struct TvArmaModel {
    int p = 0;
    int q = 0;
    std::vector<double> u_grid;
    std::vector<double> ar;      ///< |u_grid| x p, row-major
    std::vector<double> ma;      ///< |u_grid| x q, row-major
    std::vector<double> sigma2;  ///< innovation variance per u
    int window = 0;
    std::vector<double> objective;  ///< minimised Whittle objective per u
    bool converged = true;

    ArmaCoefficients coefficients_at(std::size_t iu) const;
};

/// f(u, theta) = sigma^2(u) |B_u|^2 / (2 pi |A_u|^2). u must lie within the
/// range of the model's u_grid.
double tvarma_spectrum(const TvArmaModel& model, double u, double theta);

struct FitOptions {
    int restarts = 5;
    int max_iterations = 2000;
    double tolerance = 1e-8;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Local Whittle fit at each u: tapered periodogram on the window centred at
/// floor(uN), Nelder-Mead over the tanh/partial-autocorrelation
/// parameterisation with `restarts` starts (the first at white noise), sigma^2
/// profiled out. Requires 8(p+q+1) <= window <= N.
TvArmaModel fit_tvarma(const TimeSeries& series, int p, int q, std::vector<double> u_grid,
                       int window, const FitOptions& options = {});

/// Model spectrum on every grid point.
SpectralSurface model_surface(const TvArmaModel& model, const TimeFreqGrid& grid);

struct OrderCandidate {
    int p = 0;
    int q = 0;
    double aic = 0.0;
};

struct OrderSelection {
    int p = 0;
    int q = 0;
    std::vector<OrderCandidate> table;
};

/// AIC over the orders 0..p_max x 0..q_max, AIC = sum_u [2 L_min(u) + 2(p+q+1)].
OrderSelection select_order_aic(const TimeSeries& series, int p_max, int q_max,
                                const std::vector<double>& u_grid, int window,
                                const FitOptions& options = {});

}  // namespace evospec
