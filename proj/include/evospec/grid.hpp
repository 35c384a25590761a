#pragma once

#include <cstddef>
#include <vector>

namespace evospec {

/// Time-frequency evaluation grid together with the window sizes it is meant
/// for. Grids from build_grid() are the dense inference grids: C_n equally
/// spaced time points and frequencies {i*pi/B_n : i = 0..B_n}.
struct TimeFreqGrid {
    std::vector<double> u;      ///< sorted, inside (n/2N, 1 - n/2N)
    std::vector<double> theta;  ///< frequencies in [0, pi] (any order-preserving set)
    int n = 0;                  ///< local window length
    int B = 0;                  ///< lag bandwidth B_n
    std::size_t N = 0;          ///< series length

    std::size_t time_count() const noexcept { return u.size(); }
    std::size_t freq_count() const noexcept { return theta.size(); }
    std::size_t size() const noexcept { return u.size() * theta.size(); }

    /// True when theta is exactly {i*pi/B : i = 0..B}.
    bool dense_frequencies() const noexcept;

    friend bool operator==(const TimeFreqGrid&, const TimeFreqGrid&) = default;
};

/// floor((N/n)(1 - n/N)(1 - 1/log(B)^2)), floored at 1. Requires 1 < n < N, B >= 3.
int default_time_count(std::size_t N, int n, int B);

/// Dense grid with centred, equally spaced time points
/// u_j = n/(2N) + (j - 1/2)(1 - n/N)/C_n and theta_i = i*pi/B.
TimeFreqGrid build_grid(std::size_t N, int n, int B);

/// The B+1 dense frequencies i*pi/B; the last one is exactly pi.
std::vector<double> dense_frequencies(int B);

/// Grid with caller-chosen points (plotting, tuning). Validates that the time
/// points are sorted and keep their windows inside the sample.
TimeFreqGrid custom_grid(std::size_t N, int n, int B, std::vector<double> u,
                         std::vector<double> theta);

/// Smallest adjacent spacing of the time points (infinity for fewer than two).
double min_time_spacing(const TimeFreqGrid& grid) noexcept;

}  // namespace evospec
