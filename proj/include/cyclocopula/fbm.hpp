#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cyclocopula/rng.hpp"

namespace cyclocopula {

/// Hurst index, strictly inside (0, 1).
class HurstParameter {
public:
    explicit HurstParameter(double value);
    double value() const noexcept { return value_; }

private:
    double value_;
};

enum class FbmGenerator { exact_cholesky, circulant_embedding };

/// A sampled fBm path at times 1..n. B_H(0) = 0 is implicit.
class FbmPath {
public:
    FbmPath(std::vector<double> values, HurstParameter hurst, FbmGenerator generator);

    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    HurstParameter hurst() const noexcept { return hurst_; }
    FbmGenerator generator() const noexcept { return generator_; }

private:
    std::vector<double> values_;
    HurstParameter hurst_;
    FbmGenerator generator_;
};

/// Dense symmetric matrix stored row-major.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }

private:
    std::size_t n_;
    std::vector<double> data_;
};

/// Lower-triangular Cholesky factor L with A = L L^T.
class CholeskyFactor {
public:
    /// Throws FactorizationError if a pivot drops below 1e-10 times the
    /// largest diagonal entry of `a`.
    explicit CholeskyFactor(const SymmetricMatrix& a);

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return j <= i ? l_[i * n_ + j] : 0.0; }

    /// Returns L z.
    std::vector<double> apply(std::span<const double> z) const;

private:
    std::size_t n_;
    std::vector<double> l_;
};

/// Cov(B_H(s), B_H(t)) = (|t|^2H + |s|^2H - |t-s|^2H) / 2.
double fbm_covariance(long s, long t, HurstParameter h);

/// Autocovariance of fractional Gaussian noise at integer lag k.
double fgn_autocovariance(long k, HurstParameter h);

/// Covariance matrix of (B_H(1), ..., B_H(n)).
SymmetricMatrix fbm_covariance_matrix(std::size_t n, HurstParameter h);

/// Exact synthesis: path = L z with z i.i.d. N(0,1) drawn from `rng`.
FbmPath generate_fbm_cholesky(std::size_t n, HurstParameter h, Rng& rng);

/// Same as above with a caller-supplied normal vector (length n).
FbmPath fbm_from_normals(const CholeskyFactor& factor, HurstParameter h, std::span<const double> z);

/// Eigenvalues of the size-2n circulant embedding of the fGn autocovariance.
/// Values in (-1e-9, 0) are clamped to zero; anything more negative throws
/// NumericalError.
std::vector<double> circulant_eigenvalues(std::size_t n, HurstParameter h);

/// Fast synthesis: fGn via circulant embedding, then cumulative sum.
FbmPath generate_fbm_circulant(std::size_t n, HurstParameter h, Rng& rng);

/// Increments B_H(t) - B_H(t-1) for t = 1..n with B_H(0) = 0.
std::vector<double> fgn_increments(const FbmPath& path);
std::vector<double> fgn_increments(std::span<const double> path);

} // namespace cyclocopula
