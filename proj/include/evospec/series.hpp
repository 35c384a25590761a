#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace evospec {

/// Observed or simulated real-valued sequence X_1..X_N.
///
/// Indexing is 1-based through at(); positions outside [1, N] read as zero,
/// which makes every windowed operation total on u in (0, 1).
class TimeSeries {
public:
    /// Throws std::invalid_argument on empty input or non-finite values.
    explicit TimeSeries(std::vector<double> values);
    TimeSeries(std::vector<double> values, int demean_bandwidth);

    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }

    double at(std::int64_t i) const noexcept {
        return (i < 1 || i > static_cast<std::int64_t>(values_.size()))
                   ? 0.0
                   : values_[static_cast<std::size_t>(i - 1)];
    }

    bool demeaned() const noexcept { return demean_bandwidth_.has_value(); }
    std::optional<int> demean_bandwidth() const noexcept { return demean_bandwidth_; }

    /// Copy with every value multiplied by `factor`.
    TimeSeries scaled(double factor) const;

private:
    std::vector<double> values_;
    std::optional<int> demean_bandwidth_;
};

}  // namespace evospec
