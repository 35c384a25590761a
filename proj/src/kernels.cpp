#include "evospec/kernels.hpp"

#include <cmath>

namespace evospec::kernels {

namespace {
// sqrt(30) / 4
const double kTaperScale = std::sqrt(30.0) / 4.0;
}  // namespace

double taper(double x) noexcept {
    const double ax = std::fabs(x);
    if (ax >= 0.5) return 0.0;
    return kTaperScale * (1.0 - 4.0 * ax * ax);
}

double lag_window(double x) noexcept {
    const double ax = std::fabs(x);
    if (ax >= 1.0) return 0.0;
    const double c = 1.0 - ax * ax * ax;
    return c * c * c;
}

double TaperKernel::operator()(double x) const noexcept { return taper(x); }
double LagWindowKernel::operator()(double x) const noexcept { return lag_window(x); }

double taper_sq_integral() {
    return simpson([](double x) { const double t = taper(x); return t * t; }, -0.5, 0.5);
}

double lag_window_sq_integral() {
    // a is even and has a |x|^3 kink at zero, so integrate the smooth half.
    static const double value =
        2.0 * simpson([](double x) { const double a = lag_window(x); return a * a; }, 0.0, 1.0);
    return value;
}

}  // namespace evospec::kernels
