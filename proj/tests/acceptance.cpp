// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "evospec/grid.hpp"
#include "evospec/io.hpp"
#include "evospec/kernels.hpp"
#include "evospec/rng.hpp"
#include "evospec/scr.hpp"
#include "evospec/simulators.hpp"
#include "evospec/spectral.hpp"
#include "oracles.hpp"

using namespace evospec;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<double> gaussian(std::size_t N, std::uint64_t seed, std::uint64_t stream) {
    std::vector<double> x(N);
    NormalStream(seed, stream).fill(x);
    return x;
}

// 1
Outcome oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    const std::size_t N = 512;
    const int n = 64;
    const int B = 16;
    const auto grid = build_grid(N, n, B);
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        const auto x = gaussian(N, 1001, s);
        const auto fast = spectral_surface(TimeSeries(x), grid, {1, true});
        for (std::size_t iu = 0; iu < grid.time_count(); ++iu) {
            const auto c = center_index(grid.u[iu], N);
            for (std::size_t it = 0; it < grid.freq_count(); ++it)
                worst = std::max(worst, std::fabs(fast(iu, it) - oracle::lag_window_estimate(x, c, grid.theta[it], n, B)));
        }
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {worst < 1e-10 && secs < 5.0,
            fmt("max |fast - oracle| = %.3g (tol 1e-10) over 20 series, %.2f s (limit 5 s)", worst, secs)};
}

// 2
Outcome kernel_checks() {
    const double t = std::fabs(kernels::taper_sq_integral() - 1.0);
    const double a = std::fabs(kernels::lag_window_sq_integral() - oracle::tricube_sq_integral());
    return {t < 1e-6 && a < 1e-9, fmt("|int tau^2 - 1| = %.3g (tol 1e-6), |int a^2 - binomial sum| = %.3g (tol 1e-9)", t, a)};
}

// Estimates at non-overlapping windows k = 1..6 of length n, theta in thetas.
std::vector<std::vector<double>> window_estimates(const TimeSeries& s, int n, int B,
                                                  const std::vector<double>& thetas) {
    const double N = static_cast<double>(s.size());
    std::vector<std::vector<double>> out(thetas.size());
    for (int k = 1; k <= 6; ++k) {
        const double u = (k + 0.5) * n / N;
        for (std::size_t t = 0; t < thetas.size(); ++t) out[t].push_back(spectral_estimate(s, u, thetas[t], n, B));
    }
    return out;
}

// 3
Outcome variance_law() {
    const std::size_t N = 8192;
    const int n = 1024;
    const int B = 32;
    const int reps = 500;
    const std::vector<double> thetas{std::numbers::pi / 2, 0.0};
    // values[t][k][rep]
    std::vector<std::vector<std::vector<double>>> values(2, std::vector<std::vector<double>>(6));
    for (int r = 0; r < reps; ++r) {
        const auto est = window_estimates(TimeSeries(gaussian(N, 3003, static_cast<std::uint64_t>(r))), n, B, thetas);
        for (std::size_t t = 0; t < 2; ++t)
            for (std::size_t k = 0; k < 6; ++k) values[t][k].push_back(est[t][k]);
    }
    double var[2] = {0.0, 0.0};
    for (std::size_t t = 0; t < 2; ++t) {
        double ss = 0.0;
        for (const auto& v : values[t]) {
            double m = 0.0;
            for (double e : v) m += e;
            m /= reps;
            for (double e : v) ss += (e - m) * (e - m);
        }
        var[t] = ss / (6.0 * (reps - 1)) * n / B;
    }
    const double target = kernels::lag_window_sq_integral() / (kTwoPi * kTwoPi);
    const double ratio = var[0] / target;
    const double eta = var[1] / var[0];
    return {std::fabs(ratio - 1.0) <= 0.15 && eta >= 1.6 && eta <= 2.4,
            fmt("var(pi/2) / ((1/2pi)^2 int a^2) = %.3f (need within 15%%); var(0)/var(pi/2) = %.3f (need [1.6, 2.4])",
                ratio, eta)};
}

// 4
Outcome bias_order() {
    const std::size_t N = 16384;
    const int n = 2048;
    const int reps = 200;
    const double phi = 0.5;
    ModelSpec spec;
    spec.kind = ModelKind::tv_ar1;
    spec.coefs["a"] = CoefFn::constant(phi);
    const double truth = 1.0 / (kTwoPi * (1.0 + phi * phi));
    double mean16 = 0.0;
    double mean32 = 0.0;
    double sq16 = 0.0;
    double sq32 = 0.0;
    const std::vector<double> th{std::numbers::pi / 2};
    for (int r = 0; r < reps; ++r) {
        const auto s = simulate(spec, N, 4004, static_cast<std::uint64_t>(r));
        const auto e16 = window_estimates(s, n, 16, th);
        const auto e32 = window_estimates(s, n, 32, th);
        for (double v : e16[0]) {
            mean16 += v;
            sq16 += v * v;
        }
        for (double v : e32[0]) {
            mean32 += v;
            sq32 += v * v;
        }
    }
    const double count = 6.0 * reps;
    mean16 /= count;
    mean32 /= count;
    const double se16 = std::sqrt((sq16 / count - mean16 * mean16) / count);
    const double bias16 = mean16 - truth;
    const double bias32 = mean32 - truth;
    const double ratio = bias16 / bias32;
    return {ratio >= 2.5 && ratio <= 6.0,
            fmt("bias(16) = %.3g, bias(32) = %.3g, ratio = %.3f (need [2.5, 6]); Monte-Carlo se of mean(16) = %.2g",
                bias16, bias32, ratio, se16)};
}

// 5
Outcome coverage() {
    const auto a = coverage_experiment(preset_model("ar1-cosine"), 400, 54, 32, 0.05, 200, 1000, 5005);
    const auto b = coverage_experiment(preset_model("arch1-sine"), 800, 72, 28, 0.1, 200, 1000, 5006);
    const bool pa = std::fabs(a.coverage_or_rejection - 0.04) <= 0.05;
    const bool pb = std::fabs(b.coverage_or_rejection - 0.09) <= 0.05;
    return {pa && pb, fmt("AR(1) N=400 (54,32) a=0.05 non-coverage %.3f (need 0.04 +- 0.05); "
                          "ARCH(1) N=800 (72,28) a=0.1 non-coverage %.3f (need 0.09 +- 0.05)",
                          a.coverage_or_rejection, b.coverage_or_rejection)};
}

// 6
Outcome test_size() {
    const auto a = power_experiment(PowerFamily::arch1_drift, NullKind::stationary, 400, 0.05, {0.0}, 200, 1000, 6006);
    const auto b = power_experiment(PowerFamily::ma1_white, NullKind::white_noise, 800, 0.05, {0.0}, 200, 1000, 6007);
    const double ra = a.points[0].rejection_rate;
    const double rb = b.points[0].rejection_rate;
    return {std::fabs(ra - 0.06) <= 0.05 && std::fabs(rb - 0.05) <= 0.05,
            fmt("stationarity, ARCH drift delta=0, N=400: rejection %.3f (need 0.06 +- 0.05); "
                "white noise, MA delta=0, N=800: rejection %.3f (need 0.05 +- 0.05)",
                ra, rb)};
}

// 7
Outcome power_monotone() {
    const auto p = power_experiment(PowerFamily::arch1_drift, NullKind::stationary, 800, 0.05, {0.0, 0.2, 0.4}, 200,
                                    1000, 7007);
    bool ok = true;
    for (std::size_t i = 1; i < p.points.size(); ++i)
        ok = ok && p.points[i].rejection_rate >= p.points[i - 1].rejection_rate - 0.03;
    return {ok, fmt("stationarity, ARCH drift N=800: rejection at delta 0/0.2/0.4 = %.3f / %.3f / %.3f "
                    "(need nondecreasing, slack 0.03)",
                    p.points[0].rejection_rate, p.points[1].rejection_rate, p.points[2].rejection_rate)};
}

// 8
Outcome whittle_recovery() {
    const auto v = validation_experiment(preset_model("ar1-linear-drift"), 800, 0.05, 50, 1000, 8008);
    return {v.rmse < 0.15 && std::fabs(v.rejection_rate - 0.04) <= 0.05,
            fmt("tvAR(1) N=800: RMSE of a1 = %.4f (need < 0.15); validation rejection %.3f (need 0.04 +- 0.05)",
                v.rmse, v.rejection_rate)};
}

// 9
Outcome stft_moments() {
    const int n = 512;
    const int reps = 2000;
    const double f = 1.0 / kTwoPi;
    const int j1 = 64;
    const int j2 = 128;
    std::vector<std::array<double, 4>> z;
    for (int r = 0; r < reps; ++r) {
        const TimeSeries s(gaussian(1024, 9009, static_cast<std::uint64_t>(r)));
        const auto [a, b] = normalized_stft_pair(s, 0.5, j1, n, f);
        const auto [c, d] = normalized_stft_pair(s, 0.5, j2, n, f);
        z.push_back({a, b, c, d});
    }
    double mean[4] = {0, 0, 0, 0};
    for (const auto& v : z)
        for (int i = 0; i < 4; ++i) mean[i] += v[static_cast<std::size_t>(i)] / reps;
    double cov[4][4] = {};
    for (const auto& v : z)
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k)
                cov[i][k] += (v[static_cast<std::size_t>(i)] - mean[i]) * (v[static_cast<std::size_t>(k)] - mean[k]) / (reps - 1);
    double vmin = 1e9;
    double vmax = 0.0;
    for (int i = 0; i < 4; ++i) {
        vmin = std::min(vmin, cov[i][i]);
        vmax = std::max(vmax, cov[i][i]);
    }
    double cmax = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int k = 2; k < 4; ++k) cmax = std::max(cmax, std::fabs(cov[i][k] / std::sqrt(cov[i][i] * cov[k][k])));
    return {vmin >= 0.85 && vmax <= 1.15 && cmax < 0.1,
            fmt("variances of Re/Im at j=%d,%d in [%.3f, %.3f] (need [0.85, 1.15]); max cross-frequency |corr| = %.3f (need < 0.1)",
                j1, j2, vmin, vmax, cmax)};
}

// 10
Outcome gumbel() {
    const auto g = gumbel_critical_value(0.05, 32, 10, 64);
    const double x = -2.0 * std::log(-std::log(1.0 - 0.05));
    const double lb = std::log(32.0);
    const double lc = std::log(10.0);
    const double T = 2 * lb + 2 * lc - std::log(std::numbers::pi * (lb + lc)) + x;
    const bool ok = std::fabs(g.threshold - 14.58) <= 0.01 && std::fabs(g.threshold - T) < 1e-12 &&
                    std::fabs(g.x - 5.94061) <= 1e-4 && std::fabs(g.x - x) < 1e-12;
    return {ok, fmt("T = %.5f (need 14.58 +- 0.01, independent %.5f); x = %.6f (need 5.94061 +- 1e-4)", g.threshold, T, g.x)};
}

// 11
Outcome determinism() {
    auto strip = [](io::json j) {
        j["payload"].erase("wall_time");
        return j.dump();
    };
    ExperimentOptions one;
    ExperimentOptions many;
    many.threads = 4;
    const auto spec = preset_model("threshold-ar");
    const bool cov = strip(io::report_to_json(coverage_experiment(spec, 400, 54, 16, 0.05, 20, 200, 11, one))) ==
                     strip(io::report_to_json(coverage_experiment(spec, 400, 54, 16, 0.05, 20, 200, 11, many)));
    const bool pow =
        strip(io::report_to_json(power_experiment(PowerFamily::ma1_white, NullKind::white_noise, 400, 0.05, {0.0, 0.4}, 8, 200, 12, one))) ==
        strip(io::report_to_json(power_experiment(PowerFamily::ma1_white, NullKind::white_noise, 400, 0.05, {0.0, 0.4}, 8, 200, 12, many)));
    const auto v = preset_model("ar1-linear-drift");
    const bool val = strip(io::report_to_json(validation_experiment(v, 400, 0.05, 6, 200, 13, one))) ==
                     strip(io::report_to_json(validation_experiment(v, 400, 0.05, 6, 200, 13, many)));
    return {cov && pow && val, fmt("reports identical for 1 vs 4 threads: coverage %s, power %s, validation %s",
                                   cov ? "yes" : "no", pow ? "yes" : "no", val ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"kernel integrals", kernel_checks},
        {"estimator variance", variance_law},
        {"bias order", bias_order},
        {"SCR coverage", coverage},
        {"test size", test_size},
        {"power monotonicity", power_monotone},
        {"Whittle recovery", whittle_recovery},
        {"normalized STFT moments", stft_moments},
        {"Gumbel closed form", gumbel},
        {"determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.count(id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s [%2d] %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += out.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
