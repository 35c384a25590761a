#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "evospec/series.hpp"

namespace evospec {

/// Which (n, B_n) pairs enter the candidate lattice.
enum class BandwidthRule {
    below_n_over_log_n,  ///< B_n < n / log(n); narrower bands, used for long series
    below_n,             ///< B_n < n; the looser constraint for moderate N
};

struct MvOptions {
    int step_n = 2;
    int step_B = 2;
    int B_min = 8;
    BandwidthRule rule = BandwidthRule::below_n_over_log_n;
    /// Overrides the default window-length search range.
    std::optional<std::pair<int, int>> n_bounds;
    /// Fixed evaluation grid shared by all candidates.
    int eval_u_count = 8;
    int eval_theta_count = 17;
    unsigned threads = 1;
};

struct MvCandidate {
    int n = 0;
    int B = 0;
    double score = 0.0;
};

struct TuningSelection {
    int n = 0;
    int B = 0;
    std::vector<MvCandidate> scores;  ///< every admissible lattice cell, n-major
    int n_l = 0;
    int n_r = 0;
};

/// (ceil(2 N^0.47), floor(3 N^0.47)) for N <= 1000, otherwise
/// (ceil(3 N^0.47), floor(4 N^0.47)). Requires N >= 50.
std::pair<int, int> candidate_bounds(std::size_t N);

/// Minimum-volatility choice of (n, B_n). Every admissible lattice cell is
/// evaluated on one fixed grid; a cell's score is the grid average of the
/// sample variance of the estimates over its 3x3 lattice neighbourhood.
/// Ties go to the smaller n, then the smaller B_n. A cell without admissible
/// neighbours scores +infinity.
TuningSelection mv_select(const TimeSeries& series, const MvOptions& options = {});

}  // namespace evospec
