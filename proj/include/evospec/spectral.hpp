#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "evospec/grid.hpp"
#include "evospec/series.hpp"

namespace evospec {

/// Values of an estimate or model spectrum on a grid, row-major in
/// (time index, frequency index).
struct SpectralSurface {
    TimeFreqGrid grid;
    std::vector<double> values;

    SpectralSurface() = default;
    explicit SpectralSurface(TimeFreqGrid g)
        : grid(std::move(g)), values(grid.size(), 0.0) {}
    SpectralSurface(TimeFreqGrid g, std::vector<double> v);

    int n() const noexcept { return grid.n; }
    int B() const noexcept { return grid.B; }
    std::size_t rows() const noexcept { return grid.time_count(); }
    std::size_t cols() const noexcept { return grid.freq_count(); }

    double operator()(std::size_t iu, std::size_t it) const { return values[iu * cols() + it]; }
    double& operator()(std::size_t iu, std::size_t it) { return values[iu * cols() + it]; }

    friend bool operator==(const SpectralSurface&, const SpectralSurface&) = default;
};

/// floor(u*N) with the guarantee that u = k/N maps to k.
std::int64_t center_index(double u, std::size_t N);

/// Tapered short-time Fourier transform
/// J_n(u, theta) = sum_i tau((i - floor(uN))/n) X_i exp(i*theta*i).
std::complex<double> stft(const TimeSeries& series, double u, double theta, int n);

/// |J_n(u, theta)|^2 / (2 pi n).
double local_periodogram(const TimeSeries& series, double u, double theta, int n);

/// Local autocovariance r(u, k); requires |k| <= n.
double local_autocov(const TimeSeries& series, double u, int lag, int n);

/// r(u, 0..max_lag) from a single pass over the window. Lags beyond the
/// window length are zero.
std::vector<double> local_autocov_sequence(const TimeSeries& series, double u, int n, int max_lag);

/// Lag-window estimate (1/2pi) sum_{|k|<=B} r(u,k) a(k/B) cos(k theta).
/// Requires B < n <= N. Not floored: the value may be negative.
double spectral_estimate(const TimeSeries& series, double u, double theta, int n, int B);

struct SurfaceOptions {
    unsigned threads = 1;
    /// Use the cosine transform for dense grids. Ignored for other grids.
    bool accelerated = true;
};

/// Estimate on every grid point using grid.n and grid.B. Per time point the
/// autocovariances are computed once; dense grids then use a DCT-I over the
/// weighted lags. Results do not depend on the thread count.
SpectralSurface spectral_surface(const TimeSeries& series, const TimeFreqGrid& grid,
                                 SurfaceOptions options = {});

/// Real and imaginary parts of J_n(u, 2 pi j/n) scaled by sqrt(pi n f_ref).
std::pair<double, double> normalized_stft_pair(const TimeSeries& series, double u, int j, int n,
                                               double f_ref);

/// Subtract a Nadaraya-Watson local mean computed with the taper as weight
/// over a window of `bandwidth` observations (truncated and renormalised at
/// the ends). Requires bandwidth < N.
TimeSeries remove_local_mean(const TimeSeries& series, int bandwidth);

}  // namespace evospec
