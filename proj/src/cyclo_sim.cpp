#include "cyclocopula/cyclo_sim.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

TimeSeries::TimeSeries(std::vector<double> values, std::optional<std::size_t> period)
    : values_(std::move(values)), period_(period) {
    if (values_.empty()) {
        throw DataError("time series must contain at least one value");
    }
    if (period_ && *period_ == 0) {
        throw UsageError("period must be a positive integer");
    }
}

void ParfbmConfig::validate() const {
    if (period == 0) {
        throw UsageError("period must be >= 1");
    }
    if (n == 0 || n % period != 0) {
        throw UsageError("series length n=" + std::to_string(n) + " must be a positive multiple of T=" +
                         std::to_string(period));
    }
    if (!(noise_sd > 0.0)) {
        throw UsageError("noise_sd must be positive");
    }
    HurstParameter{hurst};
}

std::vector<std::string> ParfbmConfig::warnings() const {
    std::vector<std::string> out;
    if (std::abs(phi) > 1.0) {
        out.push_back("|phi| = " + std::to_string(std::abs(phi)) + " exceeds 1; the recursion may be explosive");
    }
    return out;
}

PhasePartition::PhasePartition(std::vector<std::vector<double>> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) {
        throw DataError("partition has no phases");
    }
    const auto m = phases_.front().size();
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        if (phases_[i].size() != m) {
            throw DataError("ragged partition: phase " + std::to_string(i + 1) + " has " +
                            std::to_string(phases_[i].size()) + " values, expected " + std::to_string(m));
        }
    }
}

double phi_schedule(long t, std::size_t period, double phi) {
    if (period == 0) {
        throw UsageError("period must be >= 1");
    }
    const long p = static_cast<long>(period);
    const long r = ((t % p) + p) % p;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(p);
    return (1.0 + phi * std::cos(angle)) / 2.0;
}

std::pair<TimeSeries, TimeSeries> assemble_parfbm(const ParfbmConfig& config, std::span<const double> errors,
                                                  std::span<const double> white_noise) {
    config.validate();
    const std::size_t burn = config.burn_in();
    if (errors.size() != config.n + burn) {
        throw UsageError("expected " + std::to_string(config.n + burn) + " error terms");
    }
    if (white_noise.size() != config.n) {
        throw UsageError("expected " + std::to_string(config.n) + " white-noise draws");
    }
    std::vector<double> x(config.n);
    std::vector<double> y(config.n);
    double prev = 0.0;
    for (std::size_t step = 1; step <= config.n + burn; ++step) {
        // burn is a multiple of T, so internal step and recorded time share a phase
        const double coeff = phi_schedule(static_cast<long>(step), config.period, config.phi);
        prev = coeff * prev + errors[step - 1];
        if (step > burn) {
            x[step - burn - 1] = prev;
        }
    }
    for (std::size_t t = 0; t < config.n; ++t) {
        y[t] = config.alpha * x[t] + config.noise_sd * white_noise[t];
    }
    return {TimeSeries(std::move(x), config.period), TimeSeries(std::move(y), config.period)};
}

std::pair<TimeSeries, TimeSeries> simulate_parfbm(const ParfbmConfig& config, Rng& rng) {
    config.validate();
    const std::size_t total = config.n + config.burn_in();
    const HurstParameter h(config.hurst);
    const FbmPath path = config.generator == FbmGenerator::exact_cholesky ? generate_fbm_cholesky(total, h, rng)
                                                                          : generate_fbm_circulant(total, h, rng);
    std::vector<double> errors = config.error_term == ErrorTerm::increment
                                     ? fgn_increments(path)
                                     : std::vector<double>(path.values().begin(), path.values().end());
    std::vector<double> noise(config.n);
    for (auto& w : noise) {
        w = standard_normal(rng);
    }
    return assemble_parfbm(config, errors, noise);
}

PhasePartition split_phases(std::span<const double> series, std::size_t period) {
    if (period == 0) {
        throw UsageError("period must be >= 1");
    }
    if (series.empty() || series.size() % period != 0) {
        throw DataError("cannot split series of length n=" + std::to_string(series.size()) + " into T=" +
                        std::to_string(period) + " phases: T must divide n");
    }
    const std::size_t m = series.size() / period;
    std::vector<std::vector<double>> phases(period, std::vector<double>(m));
    for (std::size_t j = 0; j < series.size(); ++j) {
        phases[j % period][j / period] = series[j];
    }
    return PhasePartition(std::move(phases));
}

PhasePartition split_phases(const TimeSeries& series, std::size_t period) {
    return split_phases(series.values(), period);
}

TimeSeries combine_phases(const PhasePartition& partition) {
    const std::size_t period = partition.period();
    const std::size_t m = partition.repetitions();
    std::vector<double> out(period * m);
    for (std::size_t i = 0; i < period; ++i) {
        const auto& phase = partition.phases()[i];
        for (std::size_t k = 0; k < m; ++k) {
            out[k * period + i] = phase[k];
        }
    }
    return TimeSeries(std::move(out), period);
}

std::size_t lcm_period(std::size_t t1, std::size_t t2) {
    if (t1 == 0 || t2 == 0) {
        throw UsageError("periods must be >= 1");
    }
    return std::lcm(t1, t2);
}

PhaseStats empirical_phase_stats(const TimeSeries& series, std::size_t period) {
    const auto partition = split_phases(series, period);
    PhaseStats stats;
    for (const auto& phase : partition.phases()) {
        const double m = static_cast<double>(phase.size());
        const double mean = std::accumulate(phase.begin(), phase.end(), 0.0) / m;
        double ss = 0.0;
        for (double v : phase) {
            ss += (v - mean) * (v - mean);
        }
        stats.means.push_back(mean);
        stats.variances.push_back(ss / m);
    }
    return stats;
}

} // namespace cyclocopula
