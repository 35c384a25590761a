#include "evospec/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "evospec/kernels.hpp"
#include "evospec/parallel.hpp"

namespace evospec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_point(const TimeSeries& series, double u, int n) {
    if (!std::isfinite(u) || u <= 0.0 || u >= 1.0)
        throw std::invalid_argument("time point u must be finite and inside (0, 1)");
    if (n < 1) throw std::invalid_argument("window length n must be positive");
    if (static_cast<std::size_t>(n) > series.size())
        throw std::invalid_argument("window length n=" + std::to_string(n) +
                                    " exceeds series length N=" + std::to_string(series.size()));
}

void check_bandwidth(int n, int B) {
    if (B < 1) throw std::invalid_argument("lag bandwidth B_n must be positive");
    if (B >= n)
        throw std::invalid_argument("lag bandwidth B_n=" + std::to_string(B) +
                                    " must be smaller than window length n=" + std::to_string(n));
}

/// Tapered window values tau((i - c)/n) X_i for i in [c - ceil(n/2), c + ceil(n/2)].
struct Window {
    std::int64_t first = 0;
    std::vector<double> values;
};

Window tapered_window(const TimeSeries& series, double u, int n) {
    const std::int64_t c = center_index(u, series.size());
    const std::int64_t half = (n + 1) / 2;
    Window w;
    w.first = c - half;
    w.values.resize(static_cast<std::size_t>(2 * half + 1));
    for (std::int64_t i = w.first; i <= c + half; ++i) {
        const double t = kernels::taper(static_cast<double>(i - c) / n);
        w.values[static_cast<std::size_t>(i - w.first)] = t * series.at(i);
    }
    return w;
}

std::vector<double> autocov_from_window(const Window& w, int n, int max_lag) {
    const std::size_t len = w.values.size();
    std::vector<double> r(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        const auto lag = static_cast<std::size_t>(k);
        if (lag >= len) break;
        double acc = 0.0;
        for (std::size_t j = 0; j + lag < len; ++j) acc += w.values[j] * w.values[j + lag];
        r[lag] = acc / n;
    }
    return r;
}

/// Lag weights x_k = a(k/B) r(k), k = 0..B.
std::vector<double> weighted_lags(const std::vector<double>& r, int B) {
    std::vector<double> x(static_cast<std::size_t>(B) + 1);
    for (int k = 0; k <= B; ++k)
        x[static_cast<std::size_t>(k)] =
            kernels::lag_window(static_cast<double>(k) / B) * r[static_cast<std::size_t>(k)];
    return x;
}

double cosine_sum(const std::vector<double>& x, double theta) {
    double acc = 0.0;
    for (std::size_t k = 1; k < x.size(); ++k) acc += x[k] * std::cos(static_cast<double>(k) * theta);
    return (x[0] + 2.0 * acc) / kTwoPi;
}

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// DCT-I of a fixed length with its own aligned buffers. Each thread keeps
/// its own instances; only planning and destruction touch FFTW globals.
class CosineTransform {
public:
    explicit CosineTransform(int size) : size_(size) {
        in_ = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(size)));
        out_ = static_cast<double*>(fftw_malloc(sizeof(double) * static_cast<std::size_t>(size)));
        std::lock_guard lock(planner_mutex());
        plan_ = fftw_plan_r2r_1d(size, in_, out_, FFTW_REDFT00, FFTW_ESTIMATE);
        if (plan_ == nullptr) throw std::runtime_error("FFTW failed to plan a DCT-I");
    }
    CosineTransform(const CosineTransform&) = delete;
    CosineTransform& operator=(const CosineTransform&) = delete;
    ~CosineTransform() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(plan_);
        }
        fftw_free(in_);
        fftw_free(out_);
    }

    /// out[i] = x_0 + (-1)^i x_{L-1} + 2 sum_{k=1}^{L-2} x_k cos(pi k i/(L-1))
    void run(const std::vector<double>& x, std::vector<double>& out) {
        std::copy(x.begin(), x.end(), in_);
        fftw_execute(plan_);
        out.assign(out_, out_ + size_);
    }

private:
    int size_;
    double* in_ = nullptr;
    double* out_ = nullptr;
    fftw_plan plan_ = nullptr;
};

CosineTransform& cosine_transform(int size) {
    thread_local std::unordered_map<int, std::unique_ptr<CosineTransform>> cache;
    auto& slot = cache[size];
    if (!slot) slot = std::make_unique<CosineTransform>(size);
    return *slot;
}

}  // namespace

SpectralSurface::SpectralSurface(TimeFreqGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
        throw std::invalid_argument("surface values do not match grid dimensions");
}

std::int64_t center_index(double u, std::size_t N) {
    const double scaled = u * static_cast<double>(N);
    auto c = static_cast<std::int64_t>(std::floor(scaled));
    // u produced as k/N may land just below k after multiplication.
    if (static_cast<double>(c + 1) / static_cast<double>(N) <= u) ++c;
    return c;
}

std::complex<double> stft(const TimeSeries& series, double u, double theta, int n) {
    check_point(series, u, n);
    if (!std::isfinite(theta)) throw std::invalid_argument("frequency must be finite");
    const Window w = tapered_window(series, u, n);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t j = 0; j < w.values.size(); ++j) {
        const double phase = theta * static_cast<double>(w.first + static_cast<std::int64_t>(j));
        re += w.values[j] * std::cos(phase);
        im += w.values[j] * std::sin(phase);
    }
    return {re, im};
}

double local_periodogram(const TimeSeries& series, double u, double theta, int n) {
    return std::norm(stft(series, u, theta, n)) / (kTwoPi * n);
}

double local_autocov(const TimeSeries& series, double u, int lag, int n) {
    check_point(series, u, n);
    if (std::abs(lag) > n)
        throw std::invalid_argument("lag |k| must not exceed the window length n");
    const int k = std::abs(lag);
    return autocov_from_window(tapered_window(series, u, n), n, k)[static_cast<std::size_t>(k)];
}

std::vector<double> local_autocov_sequence(const TimeSeries& series, double u, int n,
                                           int max_lag) {
    check_point(series, u, n);
    if (max_lag < 0 || max_lag > n)
        throw std::invalid_argument("max lag must lie in [0, n]");
    return autocov_from_window(tapered_window(series, u, n), n, max_lag);
}

double spectral_estimate(const TimeSeries& series, double u, double theta, int n, int B) {
    check_point(series, u, n);
    check_bandwidth(n, B);
    if (!std::isfinite(theta)) throw std::invalid_argument("frequency must be finite");
    const auto r = autocov_from_window(tapered_window(series, u, n), n, B);
    return cosine_sum(weighted_lags(r, B), theta);
}

SpectralSurface spectral_surface(const TimeSeries& series, const TimeFreqGrid& grid,
                                 SurfaceOptions options) {
    if (grid.N != series.size())
        throw std::invalid_argument("grid was built for N=" + std::to_string(grid.N) +
                                    " but the series has N=" + std::to_string(series.size()));
    if (grid.u.empty() || grid.theta.empty()) throw std::invalid_argument("grid is empty");
    check_bandwidth(grid.n, grid.B);
    for (double u : grid.u) check_point(series, u, grid.n);

    const bool use_dct = options.accelerated && grid.dense_frequencies();
    SpectralSurface surface(grid);
    const std::size_t cols = grid.freq_count();
    parallel_for(grid.time_count(), options.threads, [&](std::size_t iu) {
        const auto r = autocov_from_window(tapered_window(series, grid.u[iu], grid.n), grid.n, grid.B);
        const auto x = weighted_lags(r, grid.B);
        double* row = surface.values.data() + iu * cols;
        if (use_dct) {
            std::vector<double> y;
            cosine_transform(grid.B + 1).run(x, y);
            for (std::size_t it = 0; it < cols; ++it) row[it] = y[it] / kTwoPi;
        } else {
            for (std::size_t it = 0; it < cols; ++it) row[it] = cosine_sum(x, grid.theta[it]);
        }
    });
    return surface;
}

std::pair<double, double> normalized_stft_pair(const TimeSeries& series, double u, int j, int n,
                                               double f_ref) {
    check_point(series, u, n);
    if (!(f_ref > 0.0) || !std::isfinite(f_ref))
        throw std::invalid_argument("reference spectral level must be positive");
    if (j < 1 || j > (n - 1) / 2)
        throw std::invalid_argument("frequency index j must lie in [1, floor((n-1)/2)]");
    const Window w = tapered_window(series, u, n);
    const double omega = kTwoPi * j / n;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t idx = 0; idx < w.values.size(); ++idx) {
        const double phase = omega * static_cast<double>(w.first + static_cast<std::int64_t>(idx));
        re += w.values[idx] * std::cos(phase);
        im += w.values[idx] * std::sin(phase);
    }
    const double scale = std::sqrt(std::numbers::pi * n * f_ref);
    return {re / scale, im / scale};
}

TimeSeries remove_local_mean(const TimeSeries& series, int bandwidth) {
    const auto N = static_cast<std::int64_t>(series.size());
    if (bandwidth < 1) throw std::invalid_argument("local-mean bandwidth must be positive");
    if (bandwidth >= N)
        throw std::invalid_argument("local-mean bandwidth must be smaller than the series length");
    const std::int64_t half = (bandwidth + 1) / 2;
    std::vector<double> out(static_cast<std::size_t>(N));
    for (std::int64_t i = 1; i <= N; ++i) {
        double num = 0.0;
        double den = 0.0;
        const std::int64_t lo = std::max<std::int64_t>(1, i - half);
        const std::int64_t hi = std::min<std::int64_t>(N, i + half);
        for (std::int64_t j = lo; j <= hi; ++j) {
            const double w = kernels::taper(static_cast<double>(j - i) / bandwidth);
            num += w * series.at(j);
            den += w;
        }
        out[static_cast<std::size_t>(i - 1)] = series.at(i) - num / den;
    }
    return TimeSeries(std::move(out), bandwidth);
}

}  // namespace evospec
