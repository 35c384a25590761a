#include "evospec/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace evospec {

namespace {
void check_values(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("time series must contain at least one value");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw std::invalid_argument("time series value " + std::to_string(i + 1) +
                                        " is not finite");
    }
}
}  // namespace

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    check_values(values_);
}

TimeSeries::TimeSeries(std::vector<double> values, int demean_bandwidth)
    : values_(std::move(values)), demean_bandwidth_(demean_bandwidth) {
    check_values(values_);
    if (demean_bandwidth <= 0) throw std::invalid_argument("demean bandwidth must be positive");
}

TimeSeries TimeSeries::scaled(double factor) const {
    std::vector<double> out(values_);
    for (double& v : out) v *= factor;
    if (demean_bandwidth_) return TimeSeries(std::move(out), *demean_bandwidth_);
    return TimeSeries(std::move(out));
}

}  // namespace evospec
