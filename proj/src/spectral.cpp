#include "cyclocopula/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cyclocopula/error.hpp"
#include "fft.hpp"

namespace cyclocopula {

namespace {

std::size_t wrap(long k, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((k % m) + m) % m);
}

// Windowed sums over indices start, start+1, ..., start+span-1 (0-based, circular).
struct WindowSums {
    std::complex<double> cross;
    double power_p;
    double power_q;
};

WindowSums window_sums(std::span<const std::complex<double>> d, std::size_t p0, std::size_t q0, std::size_t span) {
    const std::size_t n = d.size();
    WindowSums s{{0.0, 0.0}, 0.0, 0.0};
    for (std::size_t m = 0; m < span; ++m) {
        const auto a = d[(p0 + m) % n];
        const auto b = d[(q0 + m) % n];
        s.cross += a * std::conj(b);
        s.power_p += std::norm(a);
        s.power_q += std::norm(b);
    }
    return s;
}

// window power at or below this fraction of the total is rounding noise
constexpr double zero_power_fraction = 1e-24;

double power_floor(std::span<const std::complex<double>> d) {
    double total = 0.0;
    for (const auto& v : d) {
        total += std::norm(v);
    }
    return zero_power_fraction * total;
}

double coherence_from(const WindowSums& s, std::size_t p0, std::size_t q0, double floor) {
    if (s.power_p <= floor || s.power_q <= floor) {
        throw NumericalError("degenerate coherence window at (p=" + std::to_string(p0 + 1) +
                             ", q=" + std::to_string(q0 + 1) + "): zero spectral power");
    }
    const double value = std::norm(s.cross) / (s.power_p * s.power_q);
    if (p0 == q0) {
        return 1.0;
    }
    return std::clamp(value, 0.0, 1.0);
}

void check_span(std::size_t span, std::size_t n) {
    if (span == 0) {
        throw UsageError("smoothing span M must be >= 1");
    }
    if (span > n) {
        throw UsageError("smoothing span M=" + std::to_string(span) + " exceeds series length " + std::to_string(n));
    }
}

} // namespace

std::complex<double> Spectrum::at(long k) const noexcept {
    return ordinates_[wrap(k - 1, ordinates_.size())];
}

Spectrum dft_direct(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw DataError("DFT of an empty series");
    }
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s{0.0, 0.0};
        for (std::size_t t = 0; t < n; ++t) {
            // reduce (t k) mod n before scaling so the angle stays in [0, 2 pi)
            const auto r = static_cast<double>((t * k) % n);
            const double angle = 2.0 * std::numbers::pi * r / static_cast<double>(n);
            s += x[t] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = s * norm;
    }
    return Spectrum(std::move(out));
}

Spectrum dft_fft(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n == 0) {
        throw DataError("DFT of an empty series");
    }
    std::vector<std::complex<double>> in(x.begin(), x.end());
    auto out = detail::fft(in, +1);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : out) {
        v *= norm;
    }
    return Spectrum(std::move(out));
}

Spectrum dft(std::span<const double> x) {
    return x.size() <= 64 ? dft_direct(x) : dft_fft(x);
}

Spectrum dft(const TimeSeries& series) {
    return dft(series.values());
}

double coherence_statistic(const Spectrum& spectrum, long p, long q, std::size_t span) {
    const std::size_t n = spectrum.size();
    check_span(span, n);
    if (p < 1 || q < 1) {
        throw UsageError("frequency indices are 1-based");
    }
    const auto p0 = wrap(p - 1, n);
    const auto q0 = wrap(q - 1, n);
    const auto d = spectrum.ordinates();
    return coherence_from(window_sums(d, p0, q0, span), p0, q0, power_floor(d));
}

double coherence_statistic(const TimeSeries& series, long p, long q, std::size_t span) {
    return coherence_statistic(dft(series), p, q, span);
}

CoherenceMap coherence_map(const TimeSeries& series, std::size_t span) {
    const auto spectrum = dft(series);
    const std::size_t n = spectrum.size();
    check_span(span, n);
    const auto d = spectrum.ordinates();
    const double floor = power_floor(d);
    std::vector<double> values(n * n);
    for (std::size_t p0 = 0; p0 < n; ++p0) {
        for (std::size_t q0 = 0; q0 < n; ++q0) {
            values[p0 * n + q0] = coherence_from(window_sums(d, p0, q0, span), p0, q0, floor);
        }
    }
    return CoherenceMap(n, span, std::move(values));
}

double default_detect_threshold(std::size_t n, std::size_t span) {
    return 6.0 / std::sqrt(static_cast<double>(n) * static_cast<double>(span));
}

PeriodEstimate detect_period(const TimeSeries& series, const DetectOptions& options) {
    const std::size_t n = series.size();
    const std::size_t span = options.span == 0 ? static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n))))
                                               : options.span;
    const std::size_t max_period = options.max_period == 0 ? std::min<std::size_t>(12, n / 4) : options.max_period;
    if (span < 2) {
        throw UsageError("smoothing span M must be >= 2 for period detection");
    }
    check_span(span, n);
    if (max_period < 1 || max_period > n / 4) {
        throw UsageError("max period must lie in [1, n/4] = [1, " + std::to_string(n / 4) + "]");
    }
    const double threshold = options.threshold.value_or(default_detect_threshold(n, span));
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw UsageError("threshold must lie in (0, 1)");
    }

    const auto spectrum = dft(series);
    const auto d = spectrum.ordinates();
    const double floor = power_floor(d);
    const double null_level = 1.0 / static_cast<double>(span);

    PeriodEstimate estimate;
    double best = -1.0;
    for (std::size_t period = 2; period <= max_period; ++period) {
        const double exact = static_cast<double>(n) / static_cast<double>(period);
        const double rounded = std::round(exact);
        if (std::abs(exact - rounded) > 0.25) {
            estimate.skipped.push_back(period);
            continue;
        }
        const auto offset = static_cast<long>(rounded);
        double total = 0.0;
        for (std::size_t p0 = 0; p0 < n; ++p0) {
            const auto q0 = wrap(static_cast<long>(p0) + offset, n);
            total += coherence_from(window_sums(d, p0, q0, span), p0, q0, floor);
        }
        const double mean = total / static_cast<double>(n);
        const double score = (mean - null_level) / (1.0 - null_level);
        estimate.line_scores.push_back({period, offset, mean, score});
        if (score > threshold && score > best) {
            best = score;
            estimate.period = period;
        }
    }
    return estimate;
}

} // namespace cyclocopula
