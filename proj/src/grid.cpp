#include "evospec/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace evospec {

namespace {

void check_window(std::size_t N, int n, int B) {
    if (n <= 1 || static_cast<std::size_t>(n) >= N)
        throw std::invalid_argument("window length n must satisfy 1 < n < N (n=" +
                                    std::to_string(n) + ", N=" + std::to_string(N) + ")");
    if (B < 3)
        throw std::invalid_argument("lag bandwidth B_n must be at least 3 so that log(B_n) > 1");
}

}  // namespace

bool TimeFreqGrid::dense_frequencies() const noexcept {
    if (B < 1 || theta.size() != static_cast<std::size_t>(B) + 1) return false;
    const auto expected = evospec::dense_frequencies(B);
    return theta == expected;
}

std::vector<double> dense_frequencies(int B) {
    if (B < 1) throw std::invalid_argument("B_n must be positive");
    std::vector<double> theta(static_cast<std::size_t>(B) + 1);
    for (int i = 0; i < B; ++i) theta[static_cast<std::size_t>(i)] = i * std::numbers::pi / B;
    theta.back() = std::numbers::pi;
    return theta;
}

int default_time_count(std::size_t N, int n, int B) {
    check_window(N, n, B);
    const double ratio = static_cast<double>(n) / static_cast<double>(N);
    const double logb = std::log(static_cast<double>(B));
    const double c = (1.0 / ratio) * (1.0 - ratio) * (1.0 - 1.0 / (logb * logb));
    const int count = static_cast<int>(std::floor(c));
    return count < 1 ? 1 : count;
}

TimeFreqGrid build_grid(std::size_t N, int n, int B) {
    const int count = default_time_count(N, n, B);
    const double ratio = static_cast<double>(n) / static_cast<double>(N);
    const double step = (1.0 - ratio) / count;
    TimeFreqGrid grid;
    grid.u.resize(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j)
        grid.u[static_cast<std::size_t>(j - 1)] = ratio / 2.0 + (j - 0.5) * step;
    grid.theta = dense_frequencies(B);
    grid.n = n;
    grid.B = B;
    grid.N = N;
    return grid;
}

TimeFreqGrid custom_grid(std::size_t N, int n, int B, std::vector<double> u,
                         std::vector<double> theta) {
    if (n <= 1 || static_cast<std::size_t>(n) > N)
        throw std::invalid_argument("window length n must satisfy 1 < n <= N");
    if (B < 1) throw std::invalid_argument("lag bandwidth B_n must be positive");
    if (u.empty() || theta.empty()) throw std::invalid_argument("grid must be non-empty");
    const double edge = static_cast<double>(n) / (2.0 * static_cast<double>(N));
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (!(u[j] > 0.0 && u[j] < 1.0) || !std::isfinite(u[j]))
            throw std::invalid_argument("grid time points must lie in (0, 1)");
        if (u[j] <= edge || u[j] >= 1.0 - edge)
            throw std::invalid_argument("grid time point " + std::to_string(u[j]) +
                                        " puts the window outside the sample");
        if (j > 0 && !(u[j] > u[j - 1]))
            throw std::invalid_argument("grid time points must be strictly increasing");
    }
    for (double t : theta)
        if (!std::isfinite(t)) throw std::invalid_argument("grid frequencies must be finite");
    return TimeFreqGrid{std::move(u), std::move(theta), n, B, N};
}

double min_time_spacing(const TimeFreqGrid& grid) noexcept {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j < grid.u.size(); ++j) best = std::min(best, grid.u[j] - grid.u[j - 1]);
    return best;
}

}  // namespace evospec
