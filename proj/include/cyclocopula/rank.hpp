#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cyclocopula {

/// Average rank of each element divided by (m + 1). Throws DataError for m < 2.
std::vector<double> pseudo_observations(std::span<const double> sample);

/// Kendall's tau-b of paired samples, O(m log m) (Knight's merge-sort count).
/// Throws DataError if m < 2 or one margin is entirely tied.
double kendall_tau(std::span<const double> x, std::span<const double> y);

/// Empirical marginal distribution built from a sample.
///
/// cdf(x) = (L + (E + 1)/2) / (m + 1), where L counts sample points below x
/// and E those equal to it. At a sample point this is the pseudo-observation
/// (average rank over m + 1); elsewhere it interpolates half a rank, so the
/// value stays strictly inside (0, 1).
///
/// quantile(p) is the smallest sample point whose pseudo-observation is >= p
/// (the largest point if none is).
class EmpiricalMarginal {
public:
    explicit EmpiricalMarginal(std::span<const double> sample);

    std::size_t size() const noexcept { return sorted_.size(); }
    std::span<const double> sorted() const noexcept { return sorted_; }

    double cdf(double x) const;
    double quantile(double p) const;

    double min() const noexcept { return sorted_.front(); }
    double max() const noexcept { return sorted_.back(); }

private:
    std::vector<double> sorted_;
};

} // namespace cyclocopula
