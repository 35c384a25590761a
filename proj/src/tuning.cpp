#include "evospec/tuning.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "evospec/grid.hpp"
#include "evospec/parallel.hpp"
#include "evospec/spectral.hpp"

namespace evospec {

namespace {

constexpr double kWindowExponent = 0.47;

bool admissible(int n, int B, BandwidthRule rule) {
    if (B < 1 || B >= n) return false;
    if (rule == BandwidthRule::below_n_over_log_n)
        return B < static_cast<double>(n) / std::log(static_cast<double>(n));
    return true;
}

}  // namespace

std::pair<int, int> candidate_bounds(std::size_t N) {
    if (N < 50) throw std::invalid_argument("window search needs at least 50 observations");
    const double base = std::pow(static_cast<double>(N), kWindowExponent);
    const double lo = N <= 1000 ? 2.0 : 3.0;
    return {static_cast<int>(std::ceil(lo * base)), static_cast<int>(std::floor((lo + 1.0) * base))};
}

TuningSelection mv_select(const TimeSeries& series, const MvOptions& options) {
    const std::size_t N = series.size();
    if (options.step_n < 1 || options.step_B < 1)
        throw std::invalid_argument("lattice steps must be positive");
    if (options.eval_u_count < 1 || options.eval_theta_count < 2)
        throw std::invalid_argument("evaluation grid needs >= 1 time point and >= 2 frequencies");
    const auto [n_l, n_r] = options.n_bounds ? *options.n_bounds : candidate_bounds(N);
    if (n_l < 2 || n_r < n_l)
        throw std::invalid_argument("window search range must satisfy 2 <= n_l <= n_r");
    if (static_cast<std::size_t>(n_r) >= N)
        throw std::invalid_argument("largest candidate window n_r=" + std::to_string(n_r) +
                                    " is not smaller than N=" + std::to_string(N));

    std::vector<int> ns;
    for (int n = n_l; n <= n_r; n += options.step_n) ns.push_back(n);
    std::vector<int> bs;
    for (int B = options.B_min; B < ns.back(); B += options.step_B) bs.push_back(B);

    // Lattice cell (i, j) -> index into `cells`, or -1 when inadmissible.
    std::vector<int> index(ns.size() * bs.size(), -1);
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < ns.size(); ++i)
        for (std::size_t j = 0; j < bs.size(); ++j)
            if (admissible(ns[i], bs[j], options.rule)) {
                index[i * bs.size() + j] = static_cast<int>(cells.size());
                cells.emplace_back(i, j);
            }
    if (cells.empty())
        throw std::invalid_argument(
            options.rule == BandwidthRule::below_n_over_log_n
                ? "no candidate (n, B_n) satisfies B_min <= B_n < n/log(n) in the search range"
                : "no candidate (n, B_n) satisfies B_min <= B_n < n in the search range");

    const double edge = static_cast<double>(n_r) / (2.0 * static_cast<double>(N));
    std::vector<double> eval_u(static_cast<std::size_t>(options.eval_u_count));
    for (int j = 0; j < options.eval_u_count; ++j)
        eval_u[static_cast<std::size_t>(j)] =
            edge + (j + 0.5) * (1.0 - 2.0 * edge) / options.eval_u_count;
    std::vector<double> eval_theta(static_cast<std::size_t>(options.eval_theta_count));
    for (int i = 0; i < options.eval_theta_count; ++i)
        eval_theta[static_cast<std::size_t>(i)] = i * std::numbers::pi / (options.eval_theta_count - 1);
    eval_theta.back() = std::numbers::pi;

    const std::size_t points = eval_u.size() * eval_theta.size();
    std::vector<std::vector<double>> estimates(cells.size());
    parallel_for(cells.size(), options.threads, [&](std::size_t c) {
        const int n = ns[cells[c].first];
        const int B = bs[cells[c].second];
        const auto grid = custom_grid(N, n, B, eval_u, eval_theta);
        estimates[c] = spectral_surface(series, grid).values;
    });

    TuningSelection out;
    out.n_l = n_l;
    out.n_r = n_r;
    out.scores.reserve(cells.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const auto [i, j] = cells[c];
        std::vector<std::size_t> neighbours;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const auto ii = static_cast<std::ptrdiff_t>(i) + di;
                const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
                if (ii < 0 || jj < 0 || ii >= static_cast<std::ptrdiff_t>(ns.size()) ||
                    jj >= static_cast<std::ptrdiff_t>(bs.size()))
                    continue;
                const int k = index[static_cast<std::size_t>(ii) * bs.size() + static_cast<std::size_t>(jj)];
                if (k >= 0) neighbours.push_back(static_cast<std::size_t>(k));
            }
        // An isolated cell has no volatility estimate and is never preferred.
        double score = std::numeric_limits<double>::infinity();
        if (neighbours.size() > 1) {
            score = 0.0;
            const auto count = static_cast<double>(neighbours.size());
            for (std::size_t p = 0; p < points; ++p) {
                double mean = 0.0;
                for (std::size_t k : neighbours) mean += estimates[k][p];
                mean /= count;
                double ss = 0.0;
                for (std::size_t k : neighbours) {
                    const double d = estimates[k][p] - mean;
                    ss += d * d;
                }
                score += ss / (count - 1.0);
            }
            score /= static_cast<double>(points);
        }
        const int n = ns[i];
        const int B = bs[j];
        out.scores.push_back({n, B, score});
        // Cells are visited n-major then B ascending, so strict < keeps the
        // smallest (n, B) among ties.
        if (score < best || (c == 0 && !(best < score))) {
            best = score;
            out.n = n;
            out.B = B;
        }
    }
    return out;
}

}  // namespace evospec
