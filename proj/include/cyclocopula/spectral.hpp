#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cyclocopula/cyclo_sim.hpp"

namespace cyclocopula {

/// d_X(lambda_k) = n^{-1/2} sum_t x_t exp(i (t-1) lambda_k), lambda_k = 2 pi (k-1) / n.
/// Stored 0-based: ordinates()[k-1] is d_X(lambda_k).
class Spectrum {
public:
    explicit Spectrum(std::vector<std::complex<double>> ordinates) : ordinates_(std::move(ordinates)) {}

    std::size_t size() const noexcept { return ordinates_.size(); }
    std::span<const std::complex<double>> ordinates() const noexcept { return ordinates_; }

    /// 1-based, wrapping modulo n.
    std::complex<double> at(long k) const noexcept;

private:
    std::vector<std::complex<double>> ordinates_;
};

/// Squared coherence on the full n x n grid of (p, q) frequency indices.
class CoherenceMap {
public:
    CoherenceMap(std::size_t n, std::size_t span, std::vector<double> values)
        : n_(n), span_(span), values_(std::move(values)) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t span() const noexcept { return span_; }
    /// 1-based (p, q).
    double operator()(std::size_t p, std::size_t q) const { return values_.at((p - 1) * n_ + (q - 1)); }

private:
    std::size_t n_;
    std::size_t span_;
    std::vector<double> values_;
};

/// Direct O(n^2) evaluation.
Spectrum dft_direct(std::span<const double> x);
/// FFT evaluation.
Spectrum dft_fft(std::span<const double> x);
/// Direct evaluation up to n = 64, FFT beyond.
Spectrum dft(std::span<const double> x);
Spectrum dft(const TimeSeries& series);

/// |gamma(p, q, M)|^2 with frequency indices taken modulo n. Throws
/// NumericalError if either window carries zero power.
double coherence_statistic(const Spectrum& spectrum, long p, long q, std::size_t span);
double coherence_statistic(const TimeSeries& series, long p, long q, std::size_t span);

CoherenceMap coherence_map(const TimeSeries& series, std::size_t span);

struct LineScore {
    std::size_t period;
    long offset;      ///< round(n / T)
    double mean;      ///< average |gamma|^2 along q = p + offset
    double score;     ///< (mean - 1/M) / (1 - 1/M): excess over the white-noise level
};

struct PeriodEstimate {
    std::optional<std::size_t> period; ///< nullopt means stationary (T = 1)
    std::vector<LineScore> line_scores;
    std::vector<std::size_t> skipped;  ///< candidates with |n/T - round(n/T)| > 0.25
};

struct DetectOptions {
    std::size_t span = 0;        ///< 0 selects floor(sqrt(n))
    std::size_t max_period = 0;  ///< 0 selects min(12, n/4)
    std::optional<double> threshold; ///< unset selects 6 / sqrt(n M)
};

/// Default decision threshold: six null standard deviations of a line mean.
double default_detect_threshold(std::size_t n, std::size_t span);

/// Scores each candidate period 2..max_period by the mean excess coherence on
/// its first support line and returns the best-scoring candidate above the
/// threshold.
PeriodEstimate detect_period(const TimeSeries& series, const DetectOptions& options = {});

} // namespace cyclocopula
