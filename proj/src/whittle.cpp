#include "evospec/whittle.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "evospec/error.hpp"
#include "evospec/parallel.hpp"
#include "evospec/rng.hpp"

namespace evospec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Returned to the simplex in place of non-finite objective values.
constexpr double kInfeasible = 1e100;

std::complex<double> poly_on_circle(std::span<const double> coeffs, double theta) {
    std::complex<double> acc(1.0, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        acc += coeffs[i] * std::polar(1.0, static_cast<double>(i + 1) * theta);
    return acc;
}

void disable_gsl_abort() {
    static const bool once = [] {
        gsl_set_error_handler_off();
        return true;
    }();
    (void)once;
}

struct ObjectiveContext {
    std::span<const double> periodogram;
    int window;
    int p;
    int q;
};

double gsl_objective(const gsl_vector* x, void* raw) {
    const auto* ctx = static_cast<const ObjectiveContext*>(raw);
    std::vector<double> params(x->size);
    for (std::size_t i = 0; i < x->size; ++i) params[i] = gsl_vector_get(x, i);
    const double v = local_whittle_objective(params, ctx->periodogram, ctx->window, ctx->p, ctx->q);
    return std::isfinite(v) ? v : kInfeasible;
}

struct LocalFit {
    std::vector<double> params;
    double objective = std::numeric_limits<double>::infinity();
    bool converged = false;
};

LocalFit minimise(const ObjectiveContext& ctx, std::vector<double> start, const FitOptions& options) {
    const std::size_t dim = start.size();
    using VecPtr = std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)>;
    using MinPtr = std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)>;
    VecPtr x(gsl_vector_alloc(dim), &gsl_vector_free);
    VecPtr step(gsl_vector_alloc(dim), &gsl_vector_free);
    for (std::size_t i = 0; i < dim; ++i) {
        gsl_vector_set(x.get(), i, start[i]);
        gsl_vector_set(step.get(), i, 0.5);
    }
    gsl_multimin_function fn{&gsl_objective, dim, const_cast<ObjectiveContext*>(&ctx)};
    MinPtr solver(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim),
                  &gsl_multimin_fminimizer_free);
    LocalFit fit;
    if (gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get()) != GSL_SUCCESS) return fit;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(solver.get());
        if (gsl_multimin_test_size(size, options.tolerance) == GSL_SUCCESS) {
            fit.converged = true;
            break;
        }
    }
    fit.objective = solver->fval;
    fit.params.resize(dim);
    for (std::size_t i = 0; i < dim; ++i) fit.params[i] = gsl_vector_get(solver->x, i);
    return fit;
}

}  // namespace

double arma_unit_spectrum(const ArmaCoefficients& coeffs, double theta) {
    const double ar = std::abs(poly_on_circle(coeffs.ar, theta));
    if (ar < 1e-10) throw NumericError("AR polynomial vanishes on the unit circle (unit root)");
    const double ma = std::abs(poly_on_circle(coeffs.ma, theta));
    return (ma * ma) / (ar * ar) / kTwoPi;
}

std::vector<double> pacf_to_polynomial(std::span<const double> pacf) {
    // Durbin-Levinson on phi with X_t = sum phi_j X_{t-j} + e_t; c_j = -phi_j.
    std::vector<double> phi;
    for (std::size_t k = 0; k < pacf.size(); ++k) {
        const double kappa = pacf[k];
        std::vector<double> next(k + 1);
        for (std::size_t j = 0; j < k; ++j) next[j] = phi[j] - kappa * phi[k - 1 - j];
        next[k] = kappa;
        phi = std::move(next);
    }
    for (double& v : phi) v = -v;
    return phi;
}

std::vector<double> polynomial_to_pacf(std::span<const double> coeffs) {
    std::vector<double> phi(coeffs.begin(), coeffs.end());
    for (double& v : phi) v = -v;
    std::vector<double> pacf(phi.size());
    for (std::size_t k = phi.size(); k-- > 0;) {
        const double kappa = phi[k];
        pacf[k] = kappa;
        if (k == 0) break;
        const double denom = 1.0 - kappa * kappa;
        if (!(std::fabs(kappa) < 1.0) || denom <= 0.0) {
            // Not stable; report the offending value and stop reducing.
            for (std::size_t j = 0; j < k; ++j) pacf[j] = std::numeric_limits<double>::quiet_NaN();
            break;
        }
        std::vector<double> prev(k);
        for (std::size_t j = 0; j < k; ++j) prev[j] = (phi[j] + kappa * phi[k - 1 - j]) / denom;
        phi = std::move(prev);
    }
    return pacf;
}

bool is_stable_polynomial(std::span<const double> coeffs) {
    for (double k : polynomial_to_pacf(coeffs))
        if (!(std::fabs(k) < 1.0)) return false;
    return true;
}

ArmaCoefficients decode_parameters(std::span<const double> params, int p, int q) {
    if (p < 0 || q < 0 || params.size() != static_cast<std::size_t>(p + q))
        throw std::invalid_argument("parameter vector length must equal p + q");
    std::vector<double> ar_pacf(static_cast<std::size_t>(p));
    std::vector<double> ma_pacf(static_cast<std::size_t>(q));
    for (int i = 0; i < p; ++i) ar_pacf[static_cast<std::size_t>(i)] = std::tanh(params[static_cast<std::size_t>(i)]);
    for (int j = 0; j < q; ++j)
        ma_pacf[static_cast<std::size_t>(j)] = std::tanh(params[static_cast<std::size_t>(p + j)]);
    return {pacf_to_polynomial(ar_pacf), pacf_to_polynomial(ma_pacf)};
}

std::vector<double> encode_parameters(const ArmaCoefficients& coeffs) {
    std::vector<double> out;
    for (const auto* poly : {&coeffs.ar, &coeffs.ma}) {
        for (double k : polynomial_to_pacf(*poly)) {
            if (!(std::fabs(k) < 1.0))
                throw std::invalid_argument("coefficients are not causal/invertible");
            out.push_back(std::atanh(k));
        }
    }
    return out;
}

std::vector<double> fourier_frequencies(int window) {
    const int m = (window - 1) / 2;
    std::vector<double> out(static_cast<std::size_t>(std::max(m, 0)));
    for (int k = 1; k <= m; ++k) out[static_cast<std::size_t>(k - 1)] = kTwoPi * k / window;
    return out;
}

std::vector<double> local_fourier_periodogram(const TimeSeries& series, double u, int window) {
    const auto freqs = fourier_frequencies(window);
    std::vector<double> out(freqs.size());
    for (std::size_t k = 0; k < freqs.size(); ++k)
        out[k] = local_periodogram(series, u, freqs[k], window);
    return out;
}

double whittle_objective(std::span<const double> periodogram, int window,
                         const ArmaCoefficients& coeffs, double sigma2) {
    const auto freqs = fourier_frequencies(window);
    if (freqs.size() != periodogram.size())
        throw std::invalid_argument("periodogram length does not match the window's Fourier frequencies");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("innovation variance must be positive");
    double acc = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double f = sigma2 * arma_unit_spectrum(coeffs, freqs[k]);
        acc += std::log(f) + periodogram[k] / f;
    }
    return acc;
}

ProfiledWhittle profiled_whittle(std::span<const double> periodogram, int window,
                                 const ArmaCoefficients& coeffs) {
    const auto freqs = fourier_frequencies(window);
    if (freqs.size() != periodogram.size() || freqs.empty())
        throw std::invalid_argument("periodogram length does not match the window's Fourier frequencies");
    std::vector<double> unit(freqs.size());
    double ratio = 0.0;
    double log_sum = 0.0;
    for (std::size_t k = 0; k < freqs.size(); ++k) {
        unit[k] = arma_unit_spectrum(coeffs, freqs[k]);
        ratio += periodogram[k] / unit[k];
        log_sum += std::log(unit[k]);
    }
    const auto m = static_cast<double>(freqs.size());
    ProfiledWhittle out;
    out.sigma2 = ratio / m;
    out.objective = log_sum + m * std::log(out.sigma2) + m;
    return out;
}

double local_whittle_objective(std::span<const double> params, std::span<const double> periodogram,
                               int window, int p, int q) {
    try {
        const auto coeffs = decode_parameters(params, p, q);
        const auto fit = profiled_whittle(periodogram, window, coeffs);
        if (!(fit.sigma2 > 0.0) || !std::isfinite(fit.objective))
            return std::numeric_limits<double>::infinity();
        return fit.objective;
    } catch (const NumericError&) {
        return std::numeric_limits<double>::infinity();
    }
}

ArmaCoefficients TvArmaModel::coefficients_at(std::size_t iu) const {
    const auto pp = static_cast<std::size_t>(p);
    const auto qq = static_cast<std::size_t>(q);
    ArmaCoefficients c;
    c.ar.assign(ar.begin() + static_cast<std::ptrdiff_t>(iu * pp),
                ar.begin() + static_cast<std::ptrdiff_t>((iu + 1) * pp));
    c.ma.assign(ma.begin() + static_cast<std::ptrdiff_t>(iu * qq),
                ma.begin() + static_cast<std::ptrdiff_t>((iu + 1) * qq));
    return c;
}

double tvarma_spectrum(const TvArmaModel& model, double u, double theta) {
    const auto& ug = model.u_grid;
    if (ug.empty()) throw std::invalid_argument("model has no time points");
    constexpr double kSlack = 1e-12;
    if (!(u >= ug.front() - kSlack && u <= ug.back() + kSlack))
        throw std::invalid_argument("u=" + std::to_string(u) + " lies outside the model's time range [" +
                                    std::to_string(ug.front()) + ", " + std::to_string(ug.back()) + "]");
    std::size_t hi = 0;
    while (hi < ug.size() && ug[hi] < u) ++hi;
    if (hi == 0) return model.sigma2.front() * arma_unit_spectrum(model.coefficients_at(0), theta);
    if (hi == ug.size()) return model.sigma2.back() * arma_unit_spectrum(model.coefficients_at(ug.size() - 1), theta);
    const std::size_t lo = hi - 1;
    const double w = (u - ug[lo]) / (ug[hi] - ug[lo]);
    const auto a = model.coefficients_at(lo);
    const auto b = model.coefficients_at(hi);
    ArmaCoefficients c;
    c.ar.resize(a.ar.size());
    c.ma.resize(a.ma.size());
    for (std::size_t i = 0; i < a.ar.size(); ++i) c.ar[i] = (1.0 - w) * a.ar[i] + w * b.ar[i];
    for (std::size_t i = 0; i < a.ma.size(); ++i) c.ma[i] = (1.0 - w) * a.ma[i] + w * b.ma[i];
    const double s2 = (1.0 - w) * model.sigma2[lo] + w * model.sigma2[hi];
    return s2 * arma_unit_spectrum(c, theta);
}

TvArmaModel fit_tvarma(const TimeSeries& series, int p, int q, std::vector<double> u_grid,
                       int window, const FitOptions& options) {
    disable_gsl_abort();
    if (p < 0 || q < 0) throw std::invalid_argument("model orders must be non-negative");
    if (window < 8 * (p + q + 1))
        throw std::invalid_argument("fit window must be at least 8(p+q+1) = " +
                                    std::to_string(8 * (p + q + 1)));
    if (static_cast<std::size_t>(window) > series.size())
        throw std::invalid_argument("fit window exceeds the series length");
    if (u_grid.empty()) throw std::invalid_argument("fit needs at least one time point");
    for (std::size_t j = 0; j < u_grid.size(); ++j) {
        if (!(u_grid[j] > 0.0 && u_grid[j] < 1.0)) throw std::invalid_argument("fit time points must lie in (0, 1)");
        if (j > 0 && !(u_grid[j] > u_grid[j - 1]))
            throw std::invalid_argument("fit time points must be strictly increasing");
    }
    if (options.restarts < 1) throw std::invalid_argument("at least one optimiser start is required");

    const std::size_t count = u_grid.size();
    const auto dim = static_cast<std::size_t>(p + q);
    TvArmaModel model;
    model.p = p;
    model.q = q;
    model.window = window;
    model.ar.assign(count * static_cast<std::size_t>(p), 0.0);
    model.ma.assign(count * static_cast<std::size_t>(q), 0.0);
    model.sigma2.assign(count, 0.0);
    model.objective.assign(count, 0.0);
    std::vector<char> converged(count, 1);

    parallel_for(count, options.threads, [&](std::size_t iu) {
        const auto periodogram = local_fourier_periodogram(series, u_grid[iu], window);
        ObjectiveContext ctx{periodogram, window, p, q};
        LocalFit best;
        if (dim == 0) {
            best.objective = local_whittle_objective({}, periodogram, window, p, q);
            best.converged = true;
        } else {
            NormalStream starts(derive_seed(options.seed, kRestartTag), iu);
            for (int r = 0; r < options.restarts; ++r) {
                std::vector<double> start(dim, 0.0);
                if (r > 0)
                    for (double& v : start) v = starts();
                auto fit = minimise(ctx, std::move(start), options);
                if (fit.objective < best.objective) best = std::move(fit);
            }
        }
        if (!std::isfinite(best.objective) || best.objective >= kInfeasible)
            throw NumericError("Whittle fit infeasible at u=" + std::to_string(u_grid[iu]) +
                               " for every optimiser start");
        const auto coeffs = decode_parameters(best.params, p, q);
        const auto prof = profiled_whittle(periodogram, window, coeffs);
        std::copy(coeffs.ar.begin(), coeffs.ar.end(), model.ar.begin() + static_cast<std::ptrdiff_t>(iu * static_cast<std::size_t>(p)));
        std::copy(coeffs.ma.begin(), coeffs.ma.end(), model.ma.begin() + static_cast<std::ptrdiff_t>(iu * static_cast<std::size_t>(q)));
        model.sigma2[iu] = prof.sigma2;
        model.objective[iu] = prof.objective;
        converged[iu] = best.converged ? 1 : 0;
    });
    for (char c : converged) model.converged = model.converged && c != 0;
    model.u_grid = std::move(u_grid);
    return model;
}

SpectralSurface model_surface(const TvArmaModel& model, const TimeFreqGrid& grid) {
    SpectralSurface out(grid);
    for (std::size_t iu = 0; iu < grid.time_count(); ++iu)
        for (std::size_t it = 0; it < grid.freq_count(); ++it)
            out(iu, it) = tvarma_spectrum(model, grid.u[iu], grid.theta[it]);
    return out;
}

OrderSelection select_order_aic(const TimeSeries& series, int p_max, int q_max,
                                const std::vector<double>& u_grid, int window,
                                const FitOptions& options) {
    if (p_max < 0 || q_max < 0 || p_max > 5 || q_max > 5)
        throw std::invalid_argument("AIC search orders must lie in [0, 5]");
    OrderSelection out;
    double best = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= p_max; ++p)
        for (int q = 0; q <= q_max; ++q) {
            const auto model = fit_tvarma(series, p, q, u_grid, window, options);
            double aic = 0.0;
            for (double l : model.objective) aic += 2.0 * l + 2.0 * (p + q + 1);
            out.table.push_back({p, q, aic});
            if (aic < best) {
                best = aic;
                out.p = p;
                out.q = q;
            }
        }
    return out;
}

}  // namespace evospec
