#include "cyclocopula/fbm.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include "cyclocopula/error.hpp"
#include "fft.hpp"

namespace cyclocopula {

HurstParameter::HurstParameter(double value) : value_(value) {
    if (!(value > 0.0 && value < 1.0)) {
        throw UsageError("Hurst index must lie in (0, 1), got " + std::to_string(value));
    }
}

FbmPath::FbmPath(std::vector<double> values, HurstParameter hurst, FbmGenerator generator)
    : values_(std::move(values)), hurst_(hurst), generator_(generator) {
    if (values_.empty()) {
        throw UsageError("fBm path must have at least one point");
    }
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
        throw NumericalError("fBm path contains non-finite values");
    }
}

namespace {
double abs_pow(long x, double e) {
    return x == 0 ? 0.0 : std::pow(static_cast<double>(std::labs(x)), e);
}
} // namespace

double fbm_covariance(long s, long t, HurstParameter h) {
    const double e = 2.0 * h.value();
    return 0.5 * (abs_pow(t, e) + abs_pow(s, e) - abs_pow(t - s, e));
}

double fgn_autocovariance(long k, HurstParameter h) {
    const double e = 2.0 * h.value();
    k = std::labs(k);
    return 0.5 * (abs_pow(k + 1, e) - 2.0 * abs_pow(k, e) + abs_pow(k - 1, e));
}

SymmetricMatrix fbm_covariance_matrix(std::size_t n, HurstParameter h) {
    if (n == 0) {
        throw UsageError("covariance matrix needs n >= 1");
    }
    SymmetricMatrix a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            const double c = fbm_covariance(static_cast<long>(i + 1), static_cast<long>(j + 1), h);
            a(i, j) = c;
            a(j, i) = c;
        }
    }
    return a;
}

CholeskyFactor::CholeskyFactor(const SymmetricMatrix& a) : n_(a.size()), l_(a.size() * a.size(), 0.0) {
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
        max_diag = std::max(max_diag, a(i, i));
    }
    const double tol = 1e-10 * max_diag;
    for (std::size_t j = 0; j < n_; ++j) {
        double pivot = a(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            pivot -= l_[j * n_ + k] * l_[j * n_ + k];
        }
        if (!(pivot >= tol) || pivot <= 0.0) {
            throw FactorizationError(j, pivot);
        }
        const double d = std::sqrt(pivot);
        l_[j * n_ + j] = d;
        for (std::size_t i = j + 1; i < n_; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                s -= l_[i * n_ + k] * l_[j * n_ + k];
            }
            l_[i * n_ + j] = s / d;
        }
    }
}

std::vector<double> CholeskyFactor::apply(std::span<const double> z) const {
    if (z.size() != n_) {
        throw UsageError("normal vector length does not match factor size");
    }
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) {
            s += l_[i * n_ + k] * z[k];
        }
        out[i] = s;
    }
    return out;
}

FbmPath fbm_from_normals(const CholeskyFactor& factor, HurstParameter h, std::span<const double> z) {
    return FbmPath(factor.apply(z), h, FbmGenerator::exact_cholesky);
}

FbmPath generate_fbm_cholesky(std::size_t n, HurstParameter h, Rng& rng) {
    const CholeskyFactor factor(fbm_covariance_matrix(n, h));
    std::vector<double> z(n);
    for (auto& v : z) {
        v = standard_normal(rng);
    }
    return fbm_from_normals(factor, h, z);
}

std::vector<double> circulant_eigenvalues(std::size_t n, HurstParameter h) {
    if (n == 0) {
        throw UsageError("circulant embedding needs n >= 1");
    }
    const std::size_t size = 2 * n;
    std::vector<std::complex<double>> row(size);
    for (std::size_t k = 0; k <= n; ++k) {
        row[k] = fgn_autocovariance(static_cast<long>(k), h);
    }
    for (std::size_t k = 1; k < n; ++k) {
        row[size - k] = row[k];
    }
    const auto spectrum = detail::fft(row, -1);
    std::vector<double> eig(size);
    for (std::size_t k = 0; k < size; ++k) {
        double lambda = spectrum[k].real();
        if (lambda < 0.0) {
            if (lambda < -1e-9) {
                throw NumericalError("circulant embedding has negative eigenvalue " + std::to_string(lambda) +
                                     " at index " + std::to_string(k));
            }
            lambda = 0.0;
        }
        eig[k] = lambda;
    }
    return eig;
}

FbmPath generate_fbm_circulant(std::size_t n, HurstParameter h, Rng& rng) {
    const auto eig = circulant_eigenvalues(n, h);
    const std::size_t size = eig.size();
    std::vector<std::complex<double>> weighted(size);
    for (std::size_t k = 0; k < size; ++k) {
        const double scale = std::sqrt(eig[k] / static_cast<double>(size));
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        weighted[k] = {scale * re, scale * im};
    }
    const auto w = detail::fft(weighted, -1);
    std::vector<double> path(n);
    double level = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        level += w[t].real();
        path[t] = level;
    }
    return FbmPath(std::move(path), h, FbmGenerator::circulant_embedding);
}

std::vector<double> fgn_increments(std::span<const double> path) {
    if (path.empty()) {
        throw UsageError("increments need a nonempty path");
    }
    std::vector<double> out(path.size());
    double prev = 0.0;
    for (std::size_t t = 0; t < path.size(); ++t) {
        out[t] = path[t] - prev;
        prev = path[t];
    }
    return out;
}

std::vector<double> fgn_increments(const FbmPath& path) {
    return fgn_increments(path.values());
}

} // namespace cyclocopula
