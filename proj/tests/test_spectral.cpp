#include "doctest.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "evospec/grid.hpp"
#include "evospec/rng.hpp"
#include "evospec/spectral.hpp"
#include "oracles.hpp"

using namespace evospec;

namespace {

std::vector<double> gaussian(std::size_t N, std::uint64_t seed) {
    std::vector<double> x(N);
    NormalStream(seed, 0).fill(x);
    return x;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("center index is floor(uN)") {
    CHECK(center_index(0.5, 400) == 200);
    CHECK(center_index(0.12345, 1000) == 123);
    for (int k = 1; k < 100; ++k) CHECK(center_index(k / 100.0, 100) == k);
}

TEST_CASE("stft and periodogram against the full-sum oracle") {
    const auto x = gaussian(300, 1);
    const TimeSeries s(x);
    for (double u : {0.2, 0.5, 0.83}) {
        for (double theta : {0.0, 0.4, 1.7, 3.0}) {
            const auto J = stft(s, u, theta, 64);
            const auto ref = oracle::stft(x, center_index(u, 300), theta, 64);
            CHECK(std::abs(J - ref) < 1e-11);
            CHECK(local_periodogram(s, u, theta, 64) ==
                  doctest::Approx(std::norm(ref) / (2.0 * std::numbers::pi * 64)).epsilon(1e-11));
        }
    }
}

TEST_CASE("local autocovariance against the double sum, both signs of the lag") {
    const auto x = gaussian(200, 2);
    const TimeSeries s(x);
    const auto c = center_index(0.4, 200);
    for (int k : {0, 1, 5, 17, 40}) {
        CHECK(local_autocov(s, 0.4, k, 50) == doctest::Approx(oracle::autocov(x, c, k, 50)).epsilon(1e-12));
        CHECK(local_autocov(s, 0.4, -k, 50) == doctest::Approx(local_autocov(s, 0.4, k, 50)).epsilon(1e-12));
    }
    CHECK(local_autocov(s, 0.4, 50, 50) == 0.0);
    const auto seq = local_autocov_sequence(s, 0.4, 50, 10);
    REQUIRE(seq.size() == 11);
    CHECK(seq[3] == doctest::Approx(local_autocov(s, 0.4, 3, 50)).epsilon(1e-13));
}

TEST_CASE("accelerated surface equals the complex-form oracle") {
    const auto x = gaussian(256, 3);
    const TimeSeries s(x);
    const auto grid = build_grid(256, 40, 12);
    const auto fast = spectral_surface(s, grid, {1, true});
    const auto slow = spectral_surface(s, grid, {1, false});
    for (std::size_t iu = 0; iu < grid.time_count(); ++iu)
        for (std::size_t it = 0; it < grid.freq_count(); ++it) {
            const double ref =
                oracle::lag_window_estimate(x, center_index(grid.u[iu], 256), grid.theta[it], 40, 12);
            CHECK(std::fabs(fast(iu, it) - ref) < 1e-12);
            CHECK(std::fabs(slow(iu, it) - ref) < 1e-12);
            CHECK(spectral_estimate(s, grid.u[iu], grid.theta[it], 40, 12) == doctest::Approx(ref).epsilon(1e-11));
        }
}

TEST_CASE("surface is thread-count invariant and scales quadratically") {
    const auto x = gaussian(600, 4);
    const TimeSeries s(x);
    const auto grid = build_grid(600, 60, 14);
    const auto one = spectral_surface(s, grid, {1});
    CHECK(spectral_surface(s, grid, {3}) == one);
    const auto doubled = spectral_surface(s.scaled(2.0), grid);
    for (std::size_t g = 0; g < one.values.size(); ++g)
        CHECK(doubled.values[g] == doctest::Approx(4.0 * one.values[g]).epsilon(1e-12));
}

TEST_CASE("custom frequencies use the direct sum") {
    const auto x = gaussian(300, 5);
    const TimeSeries s(x);
    const auto grid = custom_grid(300, 50, 10, {0.3, 0.6}, {0.25, 1.1, 2.9});
    const auto f = spectral_surface(s, grid);
    for (std::size_t iu = 0; iu < 2; ++iu)
        for (std::size_t it = 0; it < 3; ++it)
            CHECK(f(iu, it) == doctest::Approx(oracle::lag_window_estimate(x, center_index(grid.u[iu], 300),
                                                                           grid.theta[it], 50, 10))
                                   .epsilon(1e-11));
}

TEST_CASE("argument checks") {
    const TimeSeries s(gaussian(100, 6));
    CHECK_THROWS_AS(spectral_estimate(s, 0.5, 1.0, 40, 40), std::invalid_argument);
    CHECK_THROWS_AS(spectral_estimate(s, 0.0, 1.0, 40, 10), std::invalid_argument);
    CHECK_THROWS_AS(stft(s, 0.5, 1.0, 101), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries(std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(TimeSeries(std::vector<double>{1.0, NAN}), std::invalid_argument);
}

TEST_CASE("local mean removal") {
    std::vector<double> constant(400, 3.5);
    const auto flat = remove_local_mean(TimeSeries(constant), 41);
    for (double v : flat.values()) CHECK(std::fabs(v) < 1e-12);
    CHECK(flat.demeaned());
    CHECK(flat.demean_bandwidth() == 41);

    // A linear trend is removed exactly away from the ends (symmetric weights).
    std::vector<double> trend(400);
    for (std::size_t i = 0; i < trend.size(); ++i) trend[i] = 0.01 * static_cast<double>(i) - 1.0;
    const auto detrended = remove_local_mean(TimeSeries(trend), 41);
    for (std::size_t i = 30; i < 370; ++i) CHECK(std::fabs(detrended.values()[i]) < 1e-10);

    // A second pass only removes what the first left near the ends.
    const auto x = gaussian(400, 7);
    const auto once = remove_local_mean(TimeSeries(x), 41);
    const auto twice = remove_local_mean(once, 41);
    double e1 = 0.0;
    double e2 = 0.0;
    for (std::size_t i = 0; i < 400; ++i) {
        e1 += std::pow(once.values()[i] - x[i], 2);
        e2 += std::pow(twice.values()[i] - once.values()[i], 2);
    }
    CHECK(e2 < e1);
    CHECK_THROWS_AS(remove_local_mean(TimeSeries(x), 400), std::invalid_argument);
}

TEST_CASE("normalized stft pair has unit variance for white noise") {
    double sr = 0.0;
    double si = 0.0;
    const int reps = 1500;
    for (int r = 0; r < reps; ++r) {
        const TimeSeries s(gaussian(256, 100 + static_cast<std::uint64_t>(r)));
        const auto [re, im] = normalized_stft_pair(s, 0.5, 20, 128, 1.0 / (2.0 * std::numbers::pi));
        sr += re * re;
        si += im * im;
    }
    CHECK(sr / reps == doctest::Approx(1.0).epsilon(0.12));
    CHECK(si / reps == doctest::Approx(1.0).epsilon(0.12));
}

}
