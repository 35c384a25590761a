#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evospec/hypothesis.hpp"
#include "evospec/scr.hpp"
#include "evospec/series.hpp"
#include "evospec/spectral.hpp"
#include "evospec/tuning.hpp"

namespace evospec {

/// Smooth coefficient function of rescaled time u in [0, 1].
///   constant:   offset
///   polynomial: sum_k poly[k] u^k
///   cosine:     offset + amplitude cos(2 pi frequency u + phase)
///   sine:       offset + amplitude sin(2 pi frequency u + phase)
struct CoefFn {
    enum class Form { constant, polynomial, cosine, sine };
    Form form = Form::constant;
    double offset = 0.0;
    double amplitude = 0.0;
    double frequency = 1.0;
    double phase = 0.0;
    std::vector<double> poly;

    double operator()(double u) const;

    static CoefFn constant(double c);
    static CoefFn polynomial(std::vector<double> coeffs);
    static CoefFn cosine(double amplitude, double frequency = 1.0, double phase = 0.0, double offset = 0.0);
    static CoefFn sine(double amplitude, double frequency = 1.0, double phase = 0.0, double offset = 0.0);

    friend bool operator==(const CoefFn&, const CoefFn&) = default;
};

std::string_view to_string(CoefFn::Form form) noexcept;
CoefFn::Form parse_coef_form(std::string_view text);

enum class ModelKind {
    tv_ar1,            ///< X_i = a X_{i-1} + e_i
    tv_arch1,          ///< X_i = e_i sqrt(a0 + a1 X_{i-1}^2)
    tv_markov_switch,  ///< X_i = a0 + a1 1{S_i = 1} + b X_{i-1} + e_i
    tv_threshold_ar,   ///< X_i = a max(0, X_{i-1}) + b max(0, -X_{i-1}) + e_i
    tv_bilinear,       ///< X_i = b X_{i-1} + e_i + c X_{i-1} e_{i-1}
    tv_ma1,            ///< X_i = a0 e_i + a1 e_{i-1}
    tv_ar_general,     ///< X_i + sum_j ar_j X_{i-j} = sigma e_i
};

std::string_view to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(std::string_view text);

/// Coefficient names each kind expects in ModelSpec::coefs.
std::vector<std::string> required_coefficients(ModelKind kind);

struct ModelSpec {
    ModelKind kind = ModelKind::tv_ar1;
    std::map<std::string, CoefFn> coefs;
    std::vector<CoefFn> ar;  ///< tv_ar_general only; sigma lives in coefs
    std::array<std::array<double, 2>, 2> transition{{{1.0, 0.0}, {0.0, 1.0}}};
    int burn_in = 200;

    const CoefFn& coef(const std::string& name) const;

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// Throws std::invalid_argument naming the violated condition. Conditions are
/// checked on a grid of 2001 points in [0, 1].
void validate_spec(const ModelSpec& spec);

/// Named model presets; throws std::invalid_argument for an unknown name.
///   ar1-cosine        tv_ar1, a = 0.3 cos(2 pi u)
///   arch1-sine        tv_arch1, a0 = 0.7, a1 = 0.3 sin(pi u)
///   markov-switching  a0 = 0, a1 = 0.3u, b = 0.3 cos(2 pi u), P = [[0.9, 0.1], [0.5, 0.5]]
///   threshold-ar      a = 0.3 cos(2 pi u), b = 0.3 sin(2 pi u)
///   bilinear          b = 0.3 cos(2 pi u), c = 0.1 sin(2 pi u)
///   arch1-drift       a0 = 0.3, a1 = 0.2 + delta u
///   ma1-white         a0 = 0.7 + 0.9 cos(2 pi u), a1 = delta a0
///   ar1-linear-drift  tv_ar_general, a1 = 0.3 + 0.2u, sigma = 1 + 0.3u + 0.2u^2
ModelSpec preset_model(std::string_view name, double delta = 0.0);
std::vector<std::string> preset_names();

/// Runs the recursion with coefficients at i/N, after burn_in draws at the
/// u = 0 coefficients. Substream (seed, stream) makes replicates independent.
TimeSeries simulate(const ModelSpec& spec, std::size_t N, std::uint64_t seed,
                    std::uint64_t stream = 0);

/// simulate() plus the regime sequence of tv_markov_switch (empty for the
/// other kinds).
struct SimulationPath {
    TimeSeries series;
    std::vector<int> states;
};
SimulationPath simulate_path(const ModelSpec& spec, std::size_t N, std::uint64_t seed,
                             std::uint64_t stream = 0);

/// Closed-form spectrum for tv_ar1, tv_ma1, tv_ar_general and tv_arch1 (flat
/// at a0 / (1 - a1) / 2 pi). Other kinds throw std::invalid_argument.
double true_spectrum(const ModelSpec& spec, double u, double theta);
bool has_true_spectrum(ModelKind kind) noexcept;

struct MonteCarloTruthOptions {
    std::size_t length = 200000;
    int max_lag = 64;
    std::uint64_t seed = 0x7EA1;
    unsigned threads = 1;
};

/// Stationary approximation at each grid u: simulate the model with
/// coefficients frozen at u, then smooth the demeaned sample autocovariances
/// with the lag window at bandwidth max_lag.
SpectralSurface monte_carlo_spectrum(const ModelSpec& spec, const TimeFreqGrid& grid,
                                     const MonteCarloTruthOptions& options = {});

/// Truth on a grid: closed form where available, otherwise monte_carlo_spectrum.
SpectralSurface reference_surface(const ModelSpec& spec, const TimeFreqGrid& grid,
                                  const MonteCarloTruthOptions& options = {});

/// coverage_or_rejection = mean(per_rep_outcomes). For coverage runs an
/// outcome of 1 means the band missed the truth somewhere on the grid; for
/// tests it means rejection.
struct ExperimentReport {
    std::string kind;
    ModelSpec model;
    std::size_t N = 0;
    int n = 0;
    int B = 0;
    double alpha = 0.05;
    int reps = 0;
    int n_mc = 0;
    std::uint64_t seed = 0;
    ScrMethod method = ScrMethod::bootstrap_ratio;
    double coverage_or_rejection = 0.0;
    std::vector<std::uint8_t> per_rep_outcomes;
    double wall_time = 0.0;
};

struct ExperimentOptions {
    unsigned threads = 1;
    ScrMethod method = ScrMethod::bootstrap_ratio;
    MonteCarloTruthOptions truth;
};

/// Fraction of replicates whose SCR fails to contain the true spectrum.
ExperimentReport coverage_experiment(const ModelSpec& spec, std::size_t N, int n, int B,
                                     double alpha, int reps, int n_mc, std::uint64_t seed,
                                     const ExperimentOptions& options = {});

enum class PowerFamily { arch1_drift, ma1_white };
std::string_view to_string(PowerFamily family) noexcept;
PowerFamily parse_power_family(std::string_view text);
/// stationarity for arch1_drift, white-noise for ma1_white.
NullKind default_test(PowerFamily family) noexcept;
ModelSpec family_model(PowerFamily family, double delta);

struct PowerPoint {
    double delta = 0.0;
    double rejection_rate = 0.0;
    std::vector<std::uint8_t> per_rep_outcomes;
    std::vector<int> n;  ///< MV-selected window per replicate
    std::vector<int> B;
};

struct PowerReport {
    PowerFamily family = PowerFamily::arch1_drift;
    NullKind test = NullKind::stationary;
    std::size_t N = 0;
    double alpha = 0.05;
    int reps = 0;
    int n_mc = 0;
    std::uint64_t seed = 0;
    std::vector<PowerPoint> points;
    double wall_time = 0.0;
};

/// For every delta and replicate: simulate, choose (n, B) by MV with B < n,
/// run the test. Replicate r uses simulation substream r for every delta.
PowerReport power_experiment(PowerFamily family, NullKind test, std::size_t N, double alpha,
                             const std::vector<double>& deltas, int reps, int n_mc,
                             std::uint64_t seed, const ExperimentOptions& options = {});

struct ValidationReport {
    ModelSpec model;
    std::size_t N = 0;
    double alpha = 0.05;
    int reps = 0;
    int n_mc = 0;
    std::uint64_t seed = 0;
    double rmse = 0.0;            ///< pooled over replicates and grid times
    double rejection_rate = 0.0;
    std::vector<std::uint8_t> per_rep_outcomes;
    std::vector<double> per_rep_rmse;
    std::vector<int> n;
    std::vector<int> B;
    double wall_time = 0.0;
};

/// tv_ar_general with p = 1: per replicate, MV (B < n), local Whittle AR(1)
/// fit at the grid times with window n, RMSE of the fitted a_1 against the
/// truth and the model validation test.
ValidationReport validation_experiment(const ModelSpec& spec, std::size_t N, double alpha,
                                       int reps, int n_mc, std::uint64_t seed,
                                       const ExperimentOptions& options = {});

}  // namespace evospec
