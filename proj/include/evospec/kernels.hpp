#pragma once

#include <cstddef>

namespace evospec::kernels {

/// Re-scaled Epanechnikov data taper, normalised so that the integral of its
/// square is one. Support is [-1/2, 1/2].
struct TaperKernel {
    static constexpr double half_width = 0.5;
    double operator()(double x) const noexcept;
};

/// Re-scaled tri-cube lag window with a(0) = 1. Support is [-1, 1].
struct LagWindowKernel {
    static constexpr double half_width = 1.0;
    double operator()(double x) const noexcept;
};

double taper(double x) noexcept;
double lag_window(double x) noexcept;

/// Panel count of the composite Simpson rule used for kernel integrals.
inline constexpr int kSimpsonPanels = 4096;

/// Composite Simpson rule on [lo, hi]; `panels` is rounded up to an even count.
template <class F>
double simpson(F&& f, double lo, double hi, int panels = kSimpsonPanels) {
    if (panels < 2) panels = 2;
    if (panels % 2 != 0) ++panels;
    const double h = (hi - lo) / panels;
    double odd = 0.0;
    double even = 0.0;
    for (int i = 1; i < panels; ++i) {
        const double v = f(lo + i * h);
        if (i % 2 != 0)
            odd += v;
        else
            even += v;
    }
    return h / 3.0 * (f(lo) + 4.0 * odd + 2.0 * even + f(hi));
}

/// Integral of taper^2 over its support; should equal one.
double taper_sq_integral();

/// Integral of a^2(t) over [-1, 1]. Computed once and cached.
double lag_window_sq_integral();

}  // namespace evospec::kernels
