#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cyclocopula/fbm.hpp"
#include "cyclocopula/rng.hpp"

namespace cyclocopula {

/// Real-valued series indexed 1..n, optionally tagged with its period.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::optional<std::size_t> period = std::nullopt);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::optional<std::size_t> period() const noexcept { return period_; }

    /// 1-based access.
    double at(std::size_t t) const { return values_.at(t - 1); }

private:
    std::vector<double> values_;
    std::optional<std::size_t> period_;
};

/// How the fBm enters the autoregression.
enum class ErrorTerm {
    increment, ///< stationary fGn increment of a fresh path (default)
    level,     ///< the fBm level B_H(t) itself
};

struct ParfbmConfig {
    std::size_t n = 120;
    std::size_t period = 1;
    double phi = 0.3;
    double alpha = 0.3;
    double hurst = 0.25;
    double noise_sd = 1.0;
    ErrorTerm error_term = ErrorTerm::increment;
    FbmGenerator generator = FbmGenerator::circulant_embedding;

    /// Throws UsageError on a hard violation (n not a multiple of the period,
    /// noise_sd <= 0, H outside (0, 1)).
    void validate() const;

    /// Soft problems worth reporting, e.g. |phi| > 1.
    std::vector<std::string> warnings() const;

    /// Steps simulated and discarded before recording: five full periods.
    std::size_t burn_in() const noexcept { return 5 * period; }
};

/// The T sub-samples z_i, z_{i+T}, ..., z_{i+(m-1)T}. Phases are stored
/// 0-based here; phase(i) takes the 1-based index.
class PhasePartition {
public:
    /// Throws DataError if the phases have unequal lengths.
    explicit PhasePartition(std::vector<std::vector<double>> phases);

    std::size_t period() const noexcept { return phases_.size(); }
    std::size_t repetitions() const noexcept { return phases_.empty() ? 0 : phases_.front().size(); }
    std::span<const double> phase(std::size_t i) const { return phases_.at(i - 1); }
    const std::vector<std::vector<double>>& phases() const noexcept { return phases_; }

private:
    std::vector<std::vector<double>> phases_;
};

struct PhaseStats {
    std::vector<double> means;
    std::vector<double> variances;
};

/// (1 + phi cos(2 pi t / T)) / 2, with t reduced modulo T first.
double phi_schedule(long t, std::size_t period, double phi);

/// X_t = phi(t) X_{t-1} + e_t,  Y_t = alpha X_t + W_t.
std::pair<TimeSeries, TimeSeries> simulate_parfbm(const ParfbmConfig& config, Rng& rng);

/// Deterministic core of simulate_parfbm. `errors` holds e_t for the
/// burn-in plus recorded steps (n + burn_in values); `white_noise` holds the
/// n standardized draws for W_t.
std::pair<TimeSeries, TimeSeries> assemble_parfbm(const ParfbmConfig& config, std::span<const double> errors,
                                                  std::span<const double> white_noise);

PhasePartition split_phases(std::span<const double> series, std::size_t period);
PhasePartition split_phases(const TimeSeries& series, std::size_t period);
TimeSeries combine_phases(const PhasePartition& partition);

std::size_t lcm_period(std::size_t t1, std::size_t t2);

/// Per-phase mean and (population) variance.
PhaseStats empirical_phase_stats(const TimeSeries& series, std::size_t period);

} // namespace cyclocopula
