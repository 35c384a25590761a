#include "doctest.h"

#include <cmath>

#include "evospec/kernels.hpp"
#include "oracles.hpp"

using namespace evospec::kernels;

TEST_SUITE("kernels") {

TEST_CASE("taper values and support") {
    CHECK(taper(0.0) == doctest::Approx(std::sqrt(30.0) / 4.0).epsilon(1e-15));
    CHECK(taper(0.25) == doctest::Approx(std::sqrt(30.0) / 4.0 * 0.75).epsilon(1e-15));
    CHECK(taper(0.5) == 0.0);
    CHECK(taper(-0.7) == 0.0);
    for (double x : {-0.49, -0.3, -0.1, 0.05, 0.2, 0.45}) {
        CHECK(taper(x) == taper(-x));
        CHECK(taper(x) == doctest::Approx(oracle::taper(x)).epsilon(1e-15));
    }
    CHECK(TaperKernel{}(0.1) == taper(0.1));
    CHECK(TaperKernel::half_width == 0.5);
}

TEST_CASE("lag window values and support") {
    CHECK(lag_window(0.0) == 1.0);
    CHECK(lag_window(0.5) == doctest::Approx(std::pow(1.0 - 0.125, 3)).epsilon(1e-15));
    CHECK(lag_window(1.0) == 0.0);
    CHECK(lag_window(-1.3) == 0.0);
    for (double x : {-0.9, -0.4, 0.3, 0.77}) {
        CHECK(lag_window(x) == lag_window(-x));
        CHECK(lag_window(x) == doctest::Approx(oracle::tricube(x)).epsilon(1e-15));
    }
    CHECK(LagWindowKernel::half_width == 1.0);
}

TEST_CASE("taper square integrates to one") {
    CHECK(std::fabs(taper_sq_integral() - 1.0) < 1e-6);
}

TEST_CASE("lag window square integral against the binomial sum") {
    const double exact = oracle::tricube_sq_integral();
    CHECK(exact == doctest::Approx(0.94867).epsilon(1e-5));
    CHECK(std::fabs(lag_window_sq_integral() - exact) < 1e-9);
    CHECK(lag_window_sq_integral() == lag_window_sq_integral());
}

TEST_CASE("simpson is exact for cubics") {
    const double v = simpson([](double x) { return x * x * x - 2.0 * x + 1.0; }, -1.0, 2.0, 7);
    CHECK(v == doctest::Approx(3.75 - 3.0 + 3.0).epsilon(1e-13));
}

}
