#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "evospec/error.hpp"
#include "evospec/grid.hpp"
#include "evospec/kernels.hpp"
#include "evospec/scr.hpp"
#include "oracles.hpp"

using namespace evospec;

namespace {

BootstrapDistribution ladder(int count) {
    BootstrapDistribution d;
    for (int i = 1; i <= count; ++i) d.samples.push_back(static_cast<double>(i) * i);
    d.n_mc = count;
    return d;
}

}  // namespace

TEST_SUITE("scr") {

TEST_CASE("critical value is the ceil((1 - alpha) N_MC)-th order statistic") {
    const auto d = ladder(1000);
    CHECK(critical_value(d, 0.05) == 950.0);
    CHECK(critical_value(d, 0.1) == 900.0);
    CHECK(critical_value(d, 0.0505) == 950.0);
    CHECK(critical_value(ladder(999), 0.05) == 950.0);
    CHECK_THROWS_AS(critical_value(d, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(critical_value(d, 1.0), std::invalid_argument);
}

TEST_CASE("bootstrap distribution is sorted and thread-count invariant") {
    const auto grid = build_grid(300, 40, 10);
    const auto one = bootstrap_distribution(300, grid, 120, 5, 1);
    const auto three = bootstrap_distribution(300, grid, 120, 5, 3);
    CHECK(one == three);
    CHECK(std::is_sorted(one.samples.begin(), one.samples.end()));
    CHECK(one.samples.front() >= 0.0);
    CHECK_FALSE(bootstrap_distribution(300, grid, 120, 6, 1) == one);
    CHECK_THROWS_AS(bootstrap_distribution(300, grid, 99, 5, 1), std::invalid_argument);
    CHECK_THROWS_AS(bootstrap_distribution(301, grid, 120, 5, 1), std::invalid_argument);
}

TEST_CASE("band forms") {
    SpectralSurface f(build_grid(300, 40, 10));
    for (std::size_t g = 0; g < f.values.size(); ++g) f.values[g] = 0.1 + 0.01 * static_cast<double>(g % 7);
    const auto ratio = build_scr(f, 0.4, 0.05, ScrMethod::bootstrap_ratio);
    const auto wide = build_scr(f, 1.7, 0.05, ScrMethod::bootstrap_ratio);
    const auto expo = build_scr(f, 0.4, 0.05, ScrMethod::bootstrap_exp);
    for (std::size_t g = 0; g < f.values.size(); ++g) {
        CHECK(ratio.lower[g] == doctest::Approx(0.6 * f.values[g]));
        CHECK(ratio.upper[g] == doctest::Approx(1.4 * f.values[g]));
        CHECK(wide.lower[g] == 0.0);
        CHECK(expo.lower[g] == doctest::Approx(std::exp(-0.4) * f.values[g]));
        CHECK(expo.upper[g] == doctest::Approx(std::exp(0.4) * f.values[g]));
    }
    CHECK(scr_contains(ratio, f));
    auto outside = f;
    outside.values[3] *= 1.5;
    CHECK_FALSE(scr_contains(ratio, outside));
    CHECK(max_relative_deviation(outside, f) == doctest::Approx(0.25));
    f.values[2] = -0.01;
    CHECK_THROWS_AS(build_scr(f, 0.4, 0.05, ScrMethod::bootstrap_exp), NumericError);
    CHECK_THROWS_AS(build_scr(f, -0.1, 0.05, ScrMethod::bootstrap_ratio), std::invalid_argument);
}

TEST_CASE("method names") {
    for (auto m : {ScrMethod::bootstrap_ratio, ScrMethod::bootstrap_exp, ScrMethod::gumbel_ratio})
        CHECK(parse_scr_method(to_string(m)) == m);
    CHECK_THROWS_AS(parse_scr_method("gumbel"), std::invalid_argument);
}

TEST_CASE("gumbel threshold closed form") {
    const auto g = gumbel_critical_value(0.05, 32, 10, 64);
    const double x = -2.0 * std::log(-std::log(0.95));
    const double T = 2 * std::log(32.0) + 2 * std::log(10.0) -
                     std::log(std::numbers::pi * std::log(32.0) + std::numbers::pi * std::log(10.0)) + x;
    CHECK(std::fabs(g.x - 5.940390498) < 1e-9);
    CHECK(g.x == doctest::Approx(x).epsilon(1e-13));
    CHECK(g.threshold == doctest::Approx(T).epsilon(1e-13));
    CHECK(std::fabs(g.threshold - 14.58) < 0.01);
    CHECK(g.gamma == doctest::Approx(std::sqrt(T * 0.5 * oracle::tricube_sq_integral())).epsilon(1e-9));
    CHECK(gumbel_critical_value(0.1, 32, 10, 64).threshold < g.threshold);
    CHECK_THROWS_AS(gumbel_critical_value(0.05, 32, 1, 64), std::invalid_argument);
}

TEST_CASE("ratio floor") {
    CHECK_NOTHROW(check_ratio_floor({1.0, 2.0, 0.5}, "x"));
    CHECK_THROWS_AS(check_ratio_floor({1.0, 0.0, 0.5}, "x"), NumericError);
    CHECK_THROWS_AS(check_ratio_floor({0.0, 0.0}, "x"), NumericError);
}

}
