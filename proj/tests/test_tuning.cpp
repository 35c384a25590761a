#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "evospec/rng.hpp"
#include "evospec/simulators.hpp"
#include "evospec/tuning.hpp"

using namespace evospec;

TEST_SUITE("tuning") {

TEST_CASE("candidate bounds") {
    // 400^0.47 = 16.709..., 2000^0.47 = 35.60...
    CHECK(candidate_bounds(400) == std::pair{34, 50});
    CHECK(candidate_bounds(800) == std::pair{static_cast<int>(std::ceil(2 * std::pow(800.0, 0.47))),
                                             static_cast<int>(std::floor(3 * std::pow(800.0, 0.47)))});
    CHECK(candidate_bounds(2000) == std::pair{107, 142});
    CHECK(candidate_bounds(1000).first == static_cast<int>(std::ceil(2 * std::pow(1000.0, 0.47))));
    CHECK(candidate_bounds(1001).first == static_cast<int>(std::ceil(3 * std::pow(1001.0, 0.47))));
    CHECK_THROWS_AS(candidate_bounds(49), std::invalid_argument);
}

TEST_CASE("selection respects the lattice and the bandwidth rule") {
    const auto series = simulate(preset_model("ar1-cosine"), 800, 3);
    const auto sel = mv_select(series);
    CHECK(sel.n >= sel.n_l);
    CHECK(sel.n <= sel.n_r);
    CHECK(sel.B >= 8);
    CHECK(sel.B < sel.n / std::log(static_cast<double>(sel.n)));
    CHECK((sel.n - sel.n_l) % 2 == 0);
    CHECK(sel.B % 2 == 0);
    for (const auto& c : sel.scores) {
        CHECK(c.B < c.n / std::log(static_cast<double>(c.n)));
        CHECK(c.score >= 0.0);
    }
    MvOptions loose;
    loose.rule = BandwidthRule::below_n;
    const auto wide = mv_select(series, loose);
    CHECK(wide.B < wide.n);
    CHECK(wide.scores.size() > sel.scores.size());
}

TEST_CASE("selected cell has the minimal score") {
    const auto series = simulate(preset_model("arch1-sine"), 600, 8);
    const auto sel = mv_select(series);
    double best = INFINITY;
    for (const auto& c : sel.scores) best = std::min(best, c.score);
    bool found = false;
    for (const auto& c : sel.scores)
        if (c.n == sel.n && c.B == sel.B) {
            found = true;
            CHECK(c.score == best);
        }
    CHECK(found);
}

TEST_CASE("thread count and scale do not change the choice") {
    const auto series = simulate(preset_model("ar1-cosine"), 700, 9);
    MvOptions one;
    MvOptions three;
    three.threads = 3;
    const auto a = mv_select(series, one);
    const auto b = mv_select(series, three);
    CHECK(a.n == b.n);
    CHECK(a.B == b.B);
    REQUIRE(a.scores.size() == b.scores.size());
    for (std::size_t i = 0; i < a.scores.size(); ++i) CHECK(a.scores[i].score == b.scores[i].score);
    // Estimates scale with c^2, so neighbourhood variances scale with c^4.
    const auto scaled = mv_select(series.scaled(3.0), one);
    CHECK(scaled.n == a.n);
    CHECK(scaled.B == a.B);
    for (std::size_t i = 0; i < a.scores.size(); ++i)
        if (std::isfinite(a.scores[i].score))
            CHECK(scaled.scores[i].score == doctest::Approx(81.0 * a.scores[i].score).epsilon(1e-9));
}

TEST_CASE("custom bounds and errors") {
    const auto series = simulate(preset_model("ar1-cosine"), 500, 2);
    MvOptions opt;
    opt.n_bounds = std::pair{60, 70};
    const auto sel = mv_select(series, opt);
    CHECK(sel.n >= 60);
    CHECK(sel.n <= 70);
    opt.n_bounds = std::pair{20, 24};
    CHECK_THROWS_AS(mv_select(series, opt), std::invalid_argument);
    opt.n_bounds = std::pair{60, 600};
    CHECK_THROWS_AS(mv_select(series, opt), std::invalid_argument);
}

}
