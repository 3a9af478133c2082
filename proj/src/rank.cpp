#include "cyclocopula/rank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

std::vector<double> pseudo_observations(std::span<const double> sample) {
    const std::size_t m = sample.size();
    if (m < 2) {
        throw DataError("pseudo-observations need at least 2 values, got " + std::to_string(m));
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sample[a] < sample[b]; });
    std::vector<double> out(m);
    const double denom = static_cast<double>(m + 1);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && sample[order[j + 1]] == sample[order[i]]) {
            ++j;
        }
        // ranks i+1 .. j+1 share their average
        const double rank = 0.5 * static_cast<double>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            out[order[k]] = rank / denom;
        }
        i = j + 1;
    }
    return out;
}

namespace {

// Counts discordant swaps while merge-sorting `v`.
std::uint64_t merge_count(std::vector<double>& v, std::vector<double>& buf, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) {
        return 0;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::uint64_t swaps = merge_count(v, buf, lo, mid) + merge_count(v, buf, mid, hi);
    std::size_t i = lo;
    std::size_t j = mid;
    std::size_t k = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += mid - i;
            buf[k++] = v[j++];
        } else {
            buf[k++] = v[i++];
        }
    }
    while (i < mid) {
        buf[k++] = v[i++];
    }
    while (j < hi) {
        buf[k++] = v[j++];
    }
    std::copy(buf.begin() + static_cast<long>(lo), buf.begin() + static_cast<long>(hi), v.begin() + static_cast<long>(lo));
    return swaps;
}

// Sum over tie groups of t(t-1)/2 for an already sorted run of keys.
template <class Eq>
std::uint64_t tied_pairs(std::size_t m, Eq same_as_previous) {
    std::uint64_t total = 0;
    std::uint64_t run = 1;
    for (std::size_t i = 1; i < m; ++i) {
        if (same_as_previous(i)) {
            ++run;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    return total + run * (run - 1) / 2;
}

} // namespace

double kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw UsageError("kendall_tau: samples differ in length");
    }
    const std::size_t m = x.size();
    if (m < 2) {
        throw DataError("kendall_tau needs at least 2 pairs, got " + std::to_string(m));
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    const std::uint64_t n0 = static_cast<std::uint64_t>(m) * (m - 1) / 2;
    const std::uint64_t n1 = tied_pairs(m, [&](std::size_t i) { return x[order[i]] == x[order[i - 1]]; });
    const std::uint64_t n3 = tied_pairs(m, [&](std::size_t i) {
        return x[order[i]] == x[order[i - 1]] && y[order[i]] == y[order[i - 1]];
    });

    std::vector<double> ys(m);
    for (std::size_t i = 0; i < m; ++i) {
        ys[i] = y[order[i]];
    }
    std::vector<double> buf(m);
    const std::uint64_t swaps = merge_count(ys, buf, 0, m);
    const std::uint64_t n2 = tied_pairs(m, [&](std::size_t i) { return ys[i] == ys[i - 1]; });

    if (n1 == n0 || n2 == n0) {
        throw DataError("kendall_tau undefined: one margin is entirely tied");
    }
    // concordant - discordant = n0 - n1 - n2 + n3 - 2 * swaps
    const double numerator = static_cast<double>(n0) - static_cast<double>(n1) - static_cast<double>(n2) +
                             static_cast<double>(n3) - 2.0 * static_cast<double>(swaps);
    const double denom = std::sqrt(static_cast<double>(n0 - n1)) * std::sqrt(static_cast<double>(n0 - n2));
    return std::clamp(numerator / denom, -1.0, 1.0);
}

EmpiricalMarginal::EmpiricalMarginal(std::span<const double> sample) : sorted_(sample.begin(), sample.end()) {
    if (sorted_.size() < 2) {
        throw DataError("empirical marginal needs at least 2 values");
    }
    if (!std::all_of(sorted_.begin(), sorted_.end(), [](double v) { return std::isfinite(v); })) {
        throw DataError("empirical marginal sample contains non-finite values");
    }
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalMarginal::cdf(double x) const {
    const auto lo = std::lower_bound(sorted_.begin(), sorted_.end(), x);
    const auto hi = std::upper_bound(lo, sorted_.end(), x);
    const auto below = static_cast<double>(lo - sorted_.begin());
    const auto equal = static_cast<double>(hi - lo);
    return (below + (equal + 1.0) / 2.0) / static_cast<double>(sorted_.size() + 1);
}

double EmpiricalMarginal::quantile(double p) const {
    // pseudo-observations of the sorted sample, ties sharing the average rank
    const std::size_t m = sorted_.size();
    const double denom = static_cast<double>(m + 1);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && sorted_[j + 1] == sorted_[i]) {
            ++j;
        }
        const double pseudo = 0.5 * static_cast<double>(i + j + 2) / denom;
        if (pseudo >= p) {
            return sorted_[i];
        }
        i = j + 1;
    }
    return sorted_.back();
}

} // namespace cyclocopula
