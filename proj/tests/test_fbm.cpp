#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "cyclocopula/error.hpp"
#include "cyclocopula/fbm.hpp"

using namespace cyclocopula;

namespace {

double fgn_acv_oracle(long k, double h) {
    const auto p = [h](double x) { return std::pow(std::abs(x), 2.0 * h); };
    return 0.5 * (p(k + 1.0) - 2.0 * p(k) + p(k - 1.0));
}

// eigenvalues of the symmetric circulant with first row c, by direct summation
std::vector<double> circulant_oracle(std::size_t n, double h) {
    const std::size_t size = 2 * n;
    std::vector<double> row(size, 0.0);
    for (std::size_t k = 0; k <= n; ++k) {
        row[k] = fgn_acv_oracle(static_cast<long>(k), h);
    }
    for (std::size_t k = 1; k < n; ++k) {
        row[size - k] = row[k];
    }
    std::vector<double> eig(size, 0.0);
    for (std::size_t j = 0; j < size; ++j) {
        for (std::size_t k = 0; k < size; ++k) {
            eig[j] += row[k] * std::cos(2.0 * std::numbers::pi * static_cast<double>(j * k) / size);
        }
    }
    return eig;
}

} // namespace

TEST(Hurst, RejectsOutsideOpenInterval) {
    EXPECT_THROW(HurstParameter{0.0}, UsageError);
    EXPECT_THROW(HurstParameter{1.0}, UsageError);
    EXPECT_THROW(HurstParameter{-0.2}, UsageError);
    EXPECT_THROW(HurstParameter{std::nan("")}, UsageError);
    EXPECT_DOUBLE_EQ(HurstParameter{0.3}.value(), 0.3);
}

TEST(FbmCovariance, BrownianCaseIsMinExactly) {
    const HurstParameter h{0.5};
    for (long s = 1; s <= 20; ++s) {
        for (long t = 1; t <= 20; ++t) {
            EXPECT_EQ(fbm_covariance(s, t, h), static_cast<double>(std::min(s, t)));
        }
    }
}

TEST(FbmCovariance, VarianceIsPowerLaw) {
    for (double hv : {0.1, 0.25, 0.75, 0.9}) {
        const HurstParameter h{hv};
        for (long t = 1; t <= 30; ++t) {
            EXPECT_NEAR(fbm_covariance(t, t, h), std::pow(t, 2.0 * hv), 1e-12 * std::pow(t, 2.0 * hv));
        }
    }
}

TEST(FbmCovariance, SymmetricAndZeroAtOrigin) {
    const HurstParameter h{0.3};
    EXPECT_EQ(fbm_covariance(0, 5, h), 0.0);
    EXPECT_EQ(fbm_covariance(3, 7, h), fbm_covariance(7, 3, h));
}

TEST(FgnAutocovariance, MatchesOracle) {
    for (double hv : {0.1, 0.25, 0.5, 0.75, 0.95}) {
        const HurstParameter h{hv};
        for (long k = 0; k < 50; ++k) {
            EXPECT_NEAR(fgn_autocovariance(k, h), fgn_acv_oracle(k, hv), 1e-12);
            EXPECT_DOUBLE_EQ(fgn_autocovariance(-k, h), fgn_autocovariance(k, h));
        }
    }
    EXPECT_DOUBLE_EQ(fgn_autocovariance(0, HurstParameter{0.7}), 1.0);
    EXPECT_NEAR(fgn_autocovariance(3, HurstParameter{0.5}), 0.0, 1e-15);
}

TEST(FgnAutocovariance, SignFollowsHurst) {
    EXPECT_LT(fgn_autocovariance(1, HurstParameter{0.25}), 0.0);
    EXPECT_GT(fgn_autocovariance(1, HurstParameter{0.75}), 0.0);
}

TEST(Cholesky, ReconstructsCovariance) {
    for (double hv : {0.25, 0.5, 0.75}) {
        const HurstParameter h{hv};
        const auto a = fbm_covariance_matrix(24, h);
        const CholeskyFactor l(a);
        for (std::size_t i = 0; i < 24; ++i) {
            for (std::size_t j = 0; j < 24; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < 24; ++k) {
                    s += l(i, k) * l(j, k);
                }
                EXPECT_NEAR(s, a(i, j), 1e-10 * (1.0 + std::abs(a(i, j))));
            }
        }
    }
}

TEST(Cholesky, SingularMatrixReportsPivot) {
    SymmetricMatrix a(3);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            a(i, j) = 1.0;
        }
    }
    try {
        CholeskyFactor l(a);
        FAIL() << "expected FactorizationError";
    } catch (const FactorizationError& e) {
        EXPECT_EQ(e.pivot_index(), 1u);
    }
}

TEST(Cholesky, UnitVectorsGiveColumns) {
    const HurstParameter h{0.6};
    const CholeskyFactor l(fbm_covariance_matrix(6, h));
    for (std::size_t j = 0; j < 6; ++j) {
        std::vector<double> z(6, 0.0);
        z[j] = 1.0;
        const auto path = fbm_from_normals(l, h, z);
        for (std::size_t i = 0; i < 6; ++i) {
            EXPECT_DOUBLE_EQ(path.values()[i], l(i, j));
        }
    }
    std::vector<double> wrong(5, 0.0);
    EXPECT_THROW(fbm_from_normals(l, h, wrong), UsageError);
}

TEST(Circulant, EigenvaluesMatchDirectSum) {
    for (double hv : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        for (std::size_t n : {1u, 2u, 7u, 32u, 100u}) {
            const auto got = circulant_eigenvalues(n, HurstParameter{hv});
            const auto want = circulant_oracle(n, hv);
            ASSERT_EQ(got.size(), 2 * n);
            for (std::size_t k = 0; k < got.size(); ++k) {
                EXPECT_GE(got[k], 0.0);
                EXPECT_NEAR(got[k], std::max(want[k], 0.0), 1e-9);
            }
        }
    }
}

TEST(Circulant, PathIsDeterministicUnderSeed) {
    Rng a(99);
    Rng b(99);
    const auto p = generate_fbm_circulant(50, HurstParameter{0.3}, a);
    const auto q = generate_fbm_circulant(50, HurstParameter{0.3}, b);
    ASSERT_EQ(p.size(), 50u);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(p.values()[i], q.values()[i]);
    }
    EXPECT_EQ(p.generator(), FbmGenerator::circulant_embedding);
}

TEST(Circulant, SampleCovarianceMatchesAnalytic) {
    const std::size_t n = 6;
    const int paths = 20000;
    for (double hv : {0.25, 0.75}) {
        const HurstParameter h{hv};
        Rng rng(123);
        std::vector<double> sum(n * n, 0.0);
        for (int r = 0; r < paths; ++r) {
            const auto path = generate_fbm_circulant(n, h, rng);
            const auto p = path.values();
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    sum[i * n + j] += p[i] * p[j];
                }
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                const double g = fbm_covariance(static_cast<long>(i + 1), static_cast<long>(j + 1), h);
                const double gii = fbm_covariance(static_cast<long>(i + 1), static_cast<long>(i + 1), h);
                const double gjj = fbm_covariance(static_cast<long>(j + 1), static_cast<long>(j + 1), h);
                const double se = std::sqrt((gii * gjj + g * g) / paths);
                EXPECT_NEAR(sum[i * n + j] / paths, g, 4.5 * se) << "H=" << hv << " (" << i << "," << j << ")";
            }
        }
    }
}

TEST(Cholesky, GeneratorTagsPath) {
    Rng rng(1);
    const auto p = generate_fbm_cholesky(10, HurstParameter{0.4}, rng);
    EXPECT_EQ(p.generator(), FbmGenerator::exact_cholesky);
    EXPECT_DOUBLE_EQ(p.hurst().value(), 0.4);
}

TEST(Increments, InvertCumulativeSum) {
    const std::vector<double> path{1.0, 3.0, 2.5, 2.5};
    const auto inc = fgn_increments(path);
    EXPECT_EQ(inc, (std::vector<double>{1.0, 2.0, -0.5, 0.0}));
    EXPECT_THROW(fgn_increments(std::span<const double>{}), UsageError);
}

TEST(Increments, StationaryVarianceIsOne) {
    Rng rng(5);
    const HurstParameter h{0.75};
    double s2 = 0.0;
    int count = 0;
    for (int r = 0; r < 2000; ++r) {
        for (double v : fgn_increments(generate_fbm_circulant(16, h, rng))) {
            s2 += v * v;
            ++count;
        }
    }
    EXPECT_NEAR(s2 / count, 1.0, 0.05);
}
