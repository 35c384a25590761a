#include "evospec/simulators.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <deque>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "evospec/error.hpp"
#include "evospec/grid.hpp"
#include "evospec/kernels.hpp"
#include "evospec/parallel.hpp"
#include "evospec/rng.hpp"
#include "evospec/whittle.hpp"

namespace evospec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kCheckPoints = 2001;
constexpr double kBoundarySlack = 1e-12;

double elapsed_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

template <class F>
double sup_over_u(F&& f) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kCheckPoints; ++k) worst = std::max(worst, f(static_cast<double>(k) / (kCheckPoints - 1)));
    return worst;
}

template <class F>
double inf_over_u(F&& f) {
    return -sup_over_u([&](double u) { return -f(u); });
}

double unit_uniform(Philox4x32& engine) {
    const std::uint64_t hi = engine();
    const std::uint64_t lo = engine();
    return static_cast<double>(((hi << 32) | lo) >> 11) * 0x1.0p-53;
}

// Runs the recursion for spec.burn_in + N steps; time_of(t) gives the
// coefficient time of step t. Returns the last N values.
template <class TimeOf>
std::vector<double> run_recursion(const ModelSpec& spec, std::size_t N, std::uint64_t seed,
                                  std::uint64_t stream, TimeOf&& time_of,
                                  std::vector<int>* states = nullptr) {
    const std::size_t burn = static_cast<std::size_t>(spec.burn_in);
    const std::size_t total = burn + N;
    const std::uint64_t key = derive_seed(seed, kSimulationTag);
    NormalStream noise(key, stream);
    Philox4x32 chain(derive_seed(key, 1), stream);

    std::vector<double> out(N);
    const std::size_t p = spec.ar.size();
    std::deque<double> history(std::max<std::size_t>(p, 1), 0.0);  // history[0] = X_{t-1}
    double x_prev = 0.0;
    double e_prev = 0.0;
    int state = 0;

    for (std::size_t t = 0; t < total; ++t) {
        const double u = time_of(t);
        const double e = noise();
        double x = 0.0;
        switch (spec.kind) {
            case ModelKind::tv_ar1:
                x = spec.coef("a")(u) * x_prev + e;
                break;
            case ModelKind::tv_arch1:
                x = e * std::sqrt(spec.coef("a0")(u) + spec.coef("a1")(u) * x_prev * x_prev);
                break;
            case ModelKind::tv_markov_switch: {
                const double draw = unit_uniform(chain);
                state = draw < spec.transition[static_cast<std::size_t>(state)][0] ? 0 : 1;
                x = spec.coef("a0")(u) + (state == 1 ? spec.coef("a1")(u) : 0.0) +
                    spec.coef("b")(u) * x_prev + e;
                break;
            }
            case ModelKind::tv_threshold_ar:
                x = spec.coef("a")(u) * std::max(0.0, x_prev) + spec.coef("b")(u) * std::max(0.0, -x_prev) + e;
                break;
            case ModelKind::tv_bilinear:
                x = spec.coef("b")(u) * x_prev + e + spec.coef("c")(u) * x_prev * e_prev;
                break;
            case ModelKind::tv_ma1:
                x = spec.coef("a0")(u) * e + spec.coef("a1")(u) * e_prev;
                break;
            case ModelKind::tv_ar_general: {
                x = spec.coef("sigma")(u) * e;
                for (std::size_t j = 0; j < p; ++j) x -= spec.ar[j](u) * history[j];
                break;
            }
        }
        history.pop_back();
        history.push_front(x);
        x_prev = x;
        e_prev = e;
        if (t >= burn) {
            out[t - burn] = x;
            if (states) states->push_back(state);
        }
    }
    return out;
}

ModelSpec frozen_at(const ModelSpec& spec, double u) {
    ModelSpec out = spec;
    for (auto& [name, fn] : out.coefs) fn = CoefFn::constant(spec.coef(name)(u));
    for (std::size_t j = 0; j < out.ar.size(); ++j) out.ar[j] = CoefFn::constant(spec.ar[j](u));
    return out;
}

const BootstrapDistribution& cached_bootstrap(
    std::map<std::pair<int, int>, std::shared_ptr<std::pair<std::once_flag, BootstrapDistribution>>>& cache,
    std::mutex& mutex, std::size_t N, int n, int B, int n_mc, std::uint64_t seed) {
    std::shared_ptr<std::pair<std::once_flag, BootstrapDistribution>> entry;
    {
        std::lock_guard lock(mutex);
        auto& slot = cache[{n, B}];
        if (!slot) slot = std::make_shared<std::pair<std::once_flag, BootstrapDistribution>>();
        entry = slot;
    }
    std::call_once(entry->first, [&] {
        entry->second = bootstrap_distribution(N, build_grid(N, n, B), n_mc, seed, 1);
    });
    return entry->second;
}

MvOptions experiment_mv_options() {
    MvOptions mv;
    mv.rule = BandwidthRule::below_n;
    mv.threads = 1;
    return mv;
}

void check_reps(int reps) {
    if (reps < 1) throw std::invalid_argument("experiments need at least one replicate");
}

}  // namespace

double CoefFn::operator()(double u) const {
    switch (form) {
        case Form::constant:
            return offset;
        case Form::polynomial: {
            double acc = 0.0;
            for (std::size_t k = poly.size(); k-- > 0;) acc = acc * u + poly[k];
            return acc;
        }
        case Form::cosine:
            return offset + amplitude * std::cos(kTwoPi * frequency * u + phase);
        case Form::sine:
            return offset + amplitude * std::sin(kTwoPi * frequency * u + phase);
    }
    return 0.0;
}

CoefFn CoefFn::constant(double c) {
    CoefFn f;
    f.offset = c;
    return f;
}

CoefFn CoefFn::polynomial(std::vector<double> coeffs) {
    CoefFn f;
    f.form = Form::polynomial;
    f.poly = std::move(coeffs);
    return f;
}

CoefFn CoefFn::cosine(double amplitude, double frequency, double phase, double offset) {
    CoefFn f;
    f.form = Form::cosine;
    f.amplitude = amplitude;
    f.frequency = frequency;
    f.phase = phase;
    f.offset = offset;
    return f;
}

CoefFn CoefFn::sine(double amplitude, double frequency, double phase, double offset) {
    CoefFn f = cosine(amplitude, frequency, phase, offset);
    f.form = Form::sine;
    return f;
}

std::string_view to_string(CoefFn::Form form) noexcept {
    switch (form) {
        case CoefFn::Form::constant: return "constant";
        case CoefFn::Form::polynomial: return "polynomial";
        case CoefFn::Form::cosine: return "cosine";
        case CoefFn::Form::sine: return "sine";
    }
    return "constant";
}

CoefFn::Form parse_coef_form(std::string_view text) {
    for (auto f : {CoefFn::Form::constant, CoefFn::Form::polynomial, CoefFn::Form::cosine, CoefFn::Form::sine})
        if (text == to_string(f)) return f;
    throw std::invalid_argument("unknown coefficient form '" + std::string(text) +
                                "' (expected constant, polynomial, cosine or sine)");
}

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::tv_ar1: return "tv_ar1";
        case ModelKind::tv_arch1: return "tv_arch1";
        case ModelKind::tv_markov_switch: return "tv_markov_switch";
        case ModelKind::tv_threshold_ar: return "tv_threshold_ar";
        case ModelKind::tv_bilinear: return "tv_bilinear";
        case ModelKind::tv_ma1: return "tv_ma1";
        case ModelKind::tv_ar_general: return "tv_ar_general";
    }
    return "tv_ar1";
}

ModelKind parse_model_kind(std::string_view text) {
    for (auto k : {ModelKind::tv_ar1, ModelKind::tv_arch1, ModelKind::tv_markov_switch,
                   ModelKind::tv_threshold_ar, ModelKind::tv_bilinear, ModelKind::tv_ma1,
                   ModelKind::tv_ar_general})
        if (text == to_string(k)) return k;
    throw std::invalid_argument("unknown model kind '" + std::string(text) + "'");
}

std::vector<std::string> required_coefficients(ModelKind kind) {
    switch (kind) {
        case ModelKind::tv_ar1: return {"a"};
        case ModelKind::tv_arch1: return {"a0", "a1"};
        case ModelKind::tv_markov_switch: return {"a0", "a1", "b"};
        case ModelKind::tv_threshold_ar: return {"a", "b"};
        case ModelKind::tv_bilinear: return {"b", "c"};
        case ModelKind::tv_ma1: return {"a0", "a1"};
        case ModelKind::tv_ar_general: return {"sigma"};
    }
    return {};
}

const CoefFn& ModelSpec::coef(const std::string& name) const {
    const auto it = coefs.find(name);
    if (it == coefs.end())
        throw std::invalid_argument(std::string(to_string(kind)) + " model is missing coefficient '" + name + "'");
    return it->second;
}

void validate_spec(const ModelSpec& spec) {
    if (spec.burn_in < 0) throw std::invalid_argument("burn_in must be non-negative");
    for (const auto& name : required_coefficients(spec.kind)) (void)spec.coef(name);
    auto fail = [](const std::string& what) { throw std::invalid_argument("stability condition violated: " + what); };
    switch (spec.kind) {
        case ModelKind::tv_ar1:
            if (!(sup_over_u([&](double u) { return std::fabs(spec.coef("a")(u)); }) < 1.0)) fail("sup |a(u)| < 1");
            break;
        case ModelKind::tv_arch1:
            if (!(inf_over_u([&](double u) { return spec.coef("a0")(u); }) > 0.0)) fail("a0(u) > 0");
            if (!(inf_over_u([&](double u) { return spec.coef("a1")(u); }) >= 0.0)) fail("a1(u) >= 0");
            if (!(sup_over_u([&](double u) { return spec.coef("a0")(u) + spec.coef("a1")(u); }) <=
                  1.0 + kBoundarySlack))
                fail("sup (a0(u) + a1(u)) <= 1");
            if (!(sup_over_u([&](double u) { return spec.coef("a1")(u); }) < 1.0)) fail("sup a1(u) < 1");
            break;
        case ModelKind::tv_markov_switch: {
            if (!(sup_over_u([&](double u) { return std::fabs(spec.coef("b")(u)); }) < 1.0)) fail("sup |b(u)| < 1");
            for (const auto& row : spec.transition) {
                if (row[0] < 0.0 || row[1] < 0.0) fail("transition probabilities are non-negative");
                if (std::fabs(row[0] + row[1] - 1.0) > 1e-12) fail("transition matrix rows sum to 1");
            }
            break;
        }
        case ModelKind::tv_threshold_ar:
            if (!(sup_over_u([&](double u) { return std::fabs(spec.coef("a")(u)) + std::fabs(spec.coef("b")(u)); }) < 1.0))
                fail("sup (|a(u)| + |b(u)|) < 1");
            break;
        case ModelKind::tv_bilinear:
            if (!(sup_over_u([&](double u) {
                      const double b = spec.coef("b")(u);
                      const double c = spec.coef("c")(u);
                      return b * b + c * c;
                  }) < 1.0))
                fail("sup (b(u)^2 + c(u)^2) < 1");
            break;
        case ModelKind::tv_ma1:
            break;
        case ModelKind::tv_ar_general: {
            if (!(inf_over_u([&](double u) { return spec.coef("sigma")(u); }) > 0.0)) fail("sigma(u) > 0");
            std::vector<double> a(spec.ar.size());
            for (int k = 0; k < kCheckPoints; ++k) {
                const double u = static_cast<double>(k) / (kCheckPoints - 1);
                for (std::size_t j = 0; j < a.size(); ++j) a[j] = spec.ar[j](u);
                if (!is_stable_polynomial(a)) fail("AR polynomial has all roots outside the unit circle");
            }
            break;
        }
    }
}

ModelSpec preset_model(std::string_view name, double delta) {
    ModelSpec s;
    if (name == "ar1-cosine") {
        s.kind = ModelKind::tv_ar1;
        s.coefs["a"] = CoefFn::cosine(0.3);
    } else if (name == "arch1-sine") {
        s.kind = ModelKind::tv_arch1;
        s.coefs["a0"] = CoefFn::constant(0.7);
        s.coefs["a1"] = CoefFn::sine(0.3, 0.5);
    } else if (name == "markov-switching") {
        s.kind = ModelKind::tv_markov_switch;
        s.coefs["a0"] = CoefFn::constant(0.0);
        s.coefs["a1"] = CoefFn::polynomial({0.0, 0.3});
        s.coefs["b"] = CoefFn::cosine(0.3);
        s.transition = {{{0.9, 0.1}, {0.5, 0.5}}};
    } else if (name == "threshold-ar") {
        s.kind = ModelKind::tv_threshold_ar;
        s.coefs["a"] = CoefFn::cosine(0.3);
        s.coefs["b"] = CoefFn::sine(0.3);
    } else if (name == "bilinear") {
        s.kind = ModelKind::tv_bilinear;
        s.coefs["b"] = CoefFn::cosine(0.3);
        s.coefs["c"] = CoefFn::sine(0.1);
    } else if (name == "arch1-drift") {
        s = family_model(PowerFamily::arch1_drift, delta);
    } else if (name == "ma1-white") {
        s = family_model(PowerFamily::ma1_white, delta);
    } else if (name == "ar1-linear-drift") {
        s.kind = ModelKind::tv_ar_general;
        s.ar = {CoefFn::polynomial({0.3, 0.2})};
        s.coefs["sigma"] = CoefFn::polynomial({1.0, 0.3, 0.2});
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw std::invalid_argument("unknown model preset '" + std::string(name) + "' (known: " + known + ")");
    }
    return s;
}

std::vector<std::string> preset_names() {
    return {"ar1-cosine", "arch1-sine", "markov-switching", "threshold-ar",
            "bilinear", "arch1-drift", "ma1-white", "ar1-linear-drift"};
}

SimulationPath simulate_path(const ModelSpec& spec, std::size_t N, std::uint64_t seed, std::uint64_t stream) {
    validate_spec(spec);
    if (N == 0) throw std::invalid_argument("series length must be positive");
    const std::size_t burn = static_cast<std::size_t>(spec.burn_in);
    std::vector<int> states;
    const bool regimes = spec.kind == ModelKind::tv_markov_switch;
    if (regimes) states.reserve(N);
    auto values = run_recursion(
        spec, N, seed, stream,
        [&](std::size_t t) { return t < burn ? 0.0 : static_cast<double>(t - burn + 1) / static_cast<double>(N); },
        regimes ? &states : nullptr);
    for (double v : values)
        if (!std::isfinite(v)) throw NumericError("simulated path diverged to a non-finite value");
    return {TimeSeries(std::move(values)), std::move(states)};
}

TimeSeries simulate(const ModelSpec& spec, std::size_t N, std::uint64_t seed, std::uint64_t stream) {
    return simulate_path(spec, N, seed, stream).series;
}

bool has_true_spectrum(ModelKind kind) noexcept {
    return kind == ModelKind::tv_ar1 || kind == ModelKind::tv_ma1 || kind == ModelKind::tv_ar_general ||
           kind == ModelKind::tv_arch1;
}

double true_spectrum(const ModelSpec& spec, double u, double theta) {
    const std::complex<double> z = std::polar(1.0, theta);
    switch (spec.kind) {
        case ModelKind::tv_ar1: {
            const double d = std::norm(1.0 - spec.coef("a")(u) * z);
            return 1.0 / (kTwoPi * d);
        }
        case ModelKind::tv_ma1:
            return std::norm(spec.coef("a0")(u) + spec.coef("a1")(u) * z) / kTwoPi;
        case ModelKind::tv_arch1:
            return spec.coef("a0")(u) / (1.0 - spec.coef("a1")(u)) / kTwoPi;
        case ModelKind::tv_ar_general: {
            ArmaCoefficients c;
            for (const auto& f : spec.ar) c.ar.push_back(f(u));
            const double s = spec.coef("sigma")(u);
            return s * s * arma_unit_spectrum(c, theta);
        }
        default:
            throw std::invalid_argument("no closed-form spectrum for model kind " + std::string(to_string(spec.kind)));
    }
}

SpectralSurface monte_carlo_spectrum(const ModelSpec& spec, const TimeFreqGrid& grid,
                                     const MonteCarloTruthOptions& options) {
    validate_spec(spec);
    if (options.max_lag < 1 || options.length <= static_cast<std::size_t>(options.max_lag))
        throw std::invalid_argument("Monte-Carlo truth needs length > max_lag >= 1");
    SpectralSurface out(grid);
    const int K = options.max_lag;
    parallel_for(grid.time_count(), options.threads, [&](std::size_t iu) {
        const ModelSpec frozen = frozen_at(spec, grid.u[iu]);
        const auto x = run_recursion(frozen, options.length, options.seed, iu, [](std::size_t) { return 0.0; });
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        std::vector<double> r(static_cast<std::size_t>(K) + 1, 0.0);
        for (int k = 0; k <= K; ++k) {
            double acc = 0.0;
            for (std::size_t i = 0; i + static_cast<std::size_t>(k) < x.size(); ++i)
                acc += (x[i] - mean) * (x[i + static_cast<std::size_t>(k)] - mean);
            r[static_cast<std::size_t>(k)] = acc / static_cast<double>(x.size());
        }
        for (std::size_t it = 0; it < grid.freq_count(); ++it) {
            double acc = r[0];
            for (int k = 1; k <= K; ++k)
                acc += 2.0 * kernels::lag_window(static_cast<double>(k) / K) * r[static_cast<std::size_t>(k)] *
                       std::cos(k * grid.theta[it]);
            out(iu, it) = acc / kTwoPi;
        }
    });
    return out;
}

SpectralSurface reference_surface(const ModelSpec& spec, const TimeFreqGrid& grid,
                                  const MonteCarloTruthOptions& options) {
    if (!has_true_spectrum(spec.kind)) return monte_carlo_spectrum(spec, grid, options);
    validate_spec(spec);
    SpectralSurface out(grid);
    for (std::size_t iu = 0; iu < grid.time_count(); ++iu)
        for (std::size_t it = 0; it < grid.freq_count(); ++it)
            out(iu, it) = true_spectrum(spec, grid.u[iu], grid.theta[it]);
    return out;
}

ExperimentReport coverage_experiment(const ModelSpec& spec, std::size_t N, int n, int B, double alpha,
                                     int reps, int n_mc, std::uint64_t seed,
                                     const ExperimentOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    check_reps(reps);
    validate_spec(spec);
    const auto grid = build_grid(N, n, B);
    auto truth_options = options.truth;
    truth_options.threads = options.threads;
    const auto truth = reference_surface(spec, grid, truth_options);

    double gamma = 0.0;
    if (options.method == ScrMethod::gumbel_ratio) {
        gamma = gumbel_critical_value(alpha, B, static_cast<int>(grid.time_count()), n).gamma;
    } else {
        const auto dist = bootstrap_distribution(N, grid, n_mc, seed, options.threads);
        gamma = critical_value(dist, alpha);
    }

    ExperimentReport report;
    report.kind = "coverage";
    report.model = spec;
    report.N = N;
    report.n = n;
    report.B = B;
    report.alpha = alpha;
    report.reps = reps;
    report.n_mc = n_mc;
    report.seed = seed;
    report.method = options.method;
    report.per_rep_outcomes.assign(static_cast<std::size_t>(reps), 0);

    parallel_for(static_cast<std::size_t>(reps), options.threads, [&](std::size_t r) {
        const auto series = simulate(spec, N, seed, r);
        const auto estimate = spectral_surface(series, grid);
        bool covered = false;
        try {
            covered = scr_contains(build_scr(estimate, gamma, alpha, options.method), truth);
        } catch (const NumericError&) {
            covered = false;
        }
        report.per_rep_outcomes[r] = covered ? 0 : 1;
    });
    double misses = 0.0;
    for (auto o : report.per_rep_outcomes) misses += o;
    report.coverage_or_rejection = misses / reps;
    report.wall_time = elapsed_since(start);
    return report;
}

std::string_view to_string(PowerFamily family) noexcept {
    return family == PowerFamily::arch1_drift ? "arch1-drift" : "ma1-white";
}

PowerFamily parse_power_family(std::string_view text) {
    if (text == "arch1-drift") return PowerFamily::arch1_drift;
    if (text == "ma1-white") return PowerFamily::ma1_white;
    throw std::invalid_argument("unknown power family '" + std::string(text) + "' (expected arch1-drift or ma1-white)");
}

NullKind default_test(PowerFamily family) noexcept {
    return family == PowerFamily::arch1_drift ? NullKind::stationary : NullKind::white_noise;
}

ModelSpec family_model(PowerFamily family, double delta) {
    ModelSpec s;
    if (family == PowerFamily::arch1_drift) {
        s.kind = ModelKind::tv_arch1;
        s.coefs["a0"] = CoefFn::constant(0.3);
        s.coefs["a1"] = CoefFn::polynomial({0.2, delta});
    } else {
        s.kind = ModelKind::tv_ma1;
        s.coefs["a0"] = CoefFn::cosine(0.9, 1.0, 0.0, 0.7);
        s.coefs["a1"] = CoefFn::cosine(0.9 * delta, 1.0, 0.0, 0.7 * delta);
    }
    return s;
}

PowerReport power_experiment(PowerFamily family, NullKind test, std::size_t N, double alpha,
                             const std::vector<double>& deltas, int reps, int n_mc,
                             std::uint64_t seed, const ExperimentOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    check_reps(reps);
    if (deltas.empty()) throw std::invalid_argument("power experiment needs at least one delta");
    std::vector<ModelSpec> specs;
    for (double d : deltas) {
        specs.push_back(family_model(family, d));
        validate_spec(specs.back());
    }

    PowerReport report;
    report.family = family;
    report.test = test;
    report.N = N;
    report.alpha = alpha;
    report.reps = reps;
    report.n_mc = n_mc;
    report.seed = seed;
    for (double d : deltas) {
        PowerPoint pt;
        pt.delta = d;
        pt.per_rep_outcomes.assign(static_cast<std::size_t>(reps), 0);
        pt.n.assign(static_cast<std::size_t>(reps), 0);
        pt.B.assign(static_cast<std::size_t>(reps), 0);
        report.points.push_back(std::move(pt));
    }

    std::map<std::pair<int, int>, std::shared_ptr<std::pair<std::once_flag, BootstrapDistribution>>> cache;
    std::mutex cache_mutex;
    const auto builder = null_builder(test);
    const auto R = static_cast<std::size_t>(reps);

    parallel_for(deltas.size() * R, options.threads, [&](std::size_t job) {
        const std::size_t id = job / R;
        const std::size_t r = job % R;
        const auto series = simulate(specs[id], N, seed, r);
        const auto sel = mv_select(series, experiment_mv_options());
        const auto& dist = cached_bootstrap(cache, cache_mutex, N, sel.n, sel.B, n_mc, seed);
        const auto estimate = spectral_surface(series, dist.grid);
        bool reject = false;
        try {
            reject = evaluate_test(estimate, builder(estimate), dist, alpha).reject;
        } catch (const NumericError&) {
            reject = true;
        }
        auto& pt = report.points[id];
        pt.per_rep_outcomes[r] = reject ? 1 : 0;
        pt.n[r] = sel.n;
        pt.B[r] = sel.B;
    });
    for (auto& pt : report.points) {
        double hits = 0.0;
        for (auto o : pt.per_rep_outcomes) hits += o;
        pt.rejection_rate = hits / reps;
    }
    report.wall_time = elapsed_since(start);
    return report;
}

ValidationReport validation_experiment(const ModelSpec& spec, std::size_t N, double alpha, int reps,
                                       int n_mc, std::uint64_t seed, const ExperimentOptions& options) {
    const auto start = std::chrono::steady_clock::now();
    check_reps(reps);
    validate_spec(spec);
    if (spec.kind != ModelKind::tv_ar_general || spec.ar.size() != 1)
        throw std::invalid_argument("validation experiment needs a tv_ar_general model with one AR coefficient");

    ValidationReport report;
    report.model = spec;
    report.N = N;
    report.alpha = alpha;
    report.reps = reps;
    report.n_mc = n_mc;
    report.seed = seed;
    const auto R = static_cast<std::size_t>(reps);
    report.per_rep_outcomes.assign(R, 0);
    report.per_rep_rmse.assign(R, 0.0);
    report.n.assign(R, 0);
    report.B.assign(R, 0);
    std::vector<double> sq_sum(R, 0.0);
    std::vector<std::size_t> sq_count(R, 0);

    std::map<std::pair<int, int>, std::shared_ptr<std::pair<std::once_flag, BootstrapDistribution>>> cache;
    std::mutex cache_mutex;

    parallel_for(R, options.threads, [&](std::size_t r) {
        const auto series = simulate(spec, N, seed, r);
        const auto sel = mv_select(series, experiment_mv_options());
        const auto& dist = cached_bootstrap(cache, cache_mutex, N, sel.n, sel.B, n_mc, seed);
        const auto& grid = dist.grid;
        FitOptions fit_options;
        fit_options.seed = seed;
        const auto model = fit_tvarma(series, 1, 0, grid.u, sel.n, fit_options);
        for (std::size_t iu = 0; iu < grid.time_count(); ++iu) {
            const double err = model.ar[iu] - spec.ar[0](grid.u[iu]);
            sq_sum[r] += err * err;
        }
        sq_count[r] = grid.time_count();
        report.per_rep_rmse[r] = std::sqrt(sq_sum[r] / static_cast<double>(sq_count[r]));
        const auto estimate = spectral_surface(series, grid);
        bool reject = false;
        try {
            reject = evaluate_test(estimate, model_surface(model, grid), dist, alpha).reject;
        } catch (const NumericError&) {
            reject = true;
        }
        report.per_rep_outcomes[r] = reject ? 1 : 0;
        report.n[r] = sel.n;
        report.B[r] = sel.B;
    });
    double total_sq = 0.0;
    double total_count = 0.0;
    double hits = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
        total_sq += sq_sum[r];
        total_count += static_cast<double>(sq_count[r]);
        hits += report.per_rep_outcomes[r];
    }
    report.rmse = std::sqrt(total_sq / total_count);
    report.rejection_rate = hits / reps;
    report.wall_time = elapsed_since(start);
    return report;
}

}  // namespace evospec
