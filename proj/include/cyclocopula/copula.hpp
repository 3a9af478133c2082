#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cyclocopula/rank.hpp"
#include "cyclocopula/rng.hpp"

namespace cyclocopula {

enum class CopulaFamily { gaussian, student_t, clayton, gumbel, frank };

inline constexpr CopulaFamily all_families[] = {CopulaFamily::gaussian, CopulaFamily::student_t,
                                                CopulaFamily::clayton, CopulaFamily::gumbel,
                                                CopulaFamily::frank};

std::string_view to_string(CopulaFamily family);
/// Accepts the names produced by to_string ("gaussian", "t", "clayton", ...),
/// case-insensitively; "student_t" and "student-t" are also accepted.
CopulaFamily parse_family(std::string_view name);

inline constexpr double default_student_nu = 4.0;

struct CopulaParams {
    double theta = 0.0;
    std::optional<double> nu; ///< present iff the family is Student t
};

/// Throws UsageError if `params` are not admissible for `family`.
void validate(CopulaFamily family, const CopulaParams& params);

/// Convenience constructor; validates.
CopulaParams make_params(CopulaFamily family, double theta, double nu = default_student_nu);

double copula_cdf(CopulaFamily family, const CopulaParams& params, double a, double b);

/// h(v | u) = dC(u, v) / du.
double conditional_h(CopulaFamily family, const CopulaParams& params, double v, double u);

/// v such that h(v | u) = w. Closed form where one exists, bisection otherwise.
double inverse_h(CopulaFamily family, const CopulaParams& params, double w, double u);

/// Bisection-only inverse of conditional_h, used where no closed form exists.
double inverse_h_numeric(CopulaFamily family, const CopulaParams& params, double w, double u);

/// Evaluates h(v_k | u) for a fixed family and fixed v-grid at many u.
/// Work that depends only on v (normal or t quantiles, logarithms) is done once.
class ConditionalGrid {
public:
    ConditionalGrid(CopulaFamily family, CopulaParams params, std::span<const double> v_grid);

    std::size_t size() const noexcept { return v_.size(); }
    /// out[k] = h(v_k | u); `out` must have size() elements.
    void evaluate(double u, std::span<double> out) const;

private:
    CopulaFamily family_;
    CopulaParams params_;
    std::vector<double> v_;
    std::vector<double> transformed_;
};

/// D_k(alpha) = k / alpha^k * int_0^alpha t^k / (e^t - 1) dt for k in {1, 2},
/// by adaptive Simpson quadrature.
double debye(int k, double alpha);

double tau_from_theta(CopulaFamily family, const CopulaParams& params);

/// Method-of-moments inversion. Attainable tau: Gaussian and t (-1, 1);
/// Clayton (0, 1); Gumbel [0, 1); Frank (-1, 1) without 0.
CopulaParams theta_from_tau(CopulaFamily family, double tau, double nu = default_student_nu);

/// i.i.d. pairs by conditional inversion: u ~ U(0,1), v = h^{-1}(w | u).
std::vector<std::pair<double, double>> sample_copula(CopulaFamily family, const CopulaParams& params, std::size_t m,
                                                     Rng& rng);

struct FittedCopula {
    CopulaFamily family;
    CopulaParams params;
    double tau_hat;
    EmpiricalMarginal x_marginal;
    EmpiricalMarginal y_marginal;
};

inline constexpr std::size_t min_fit_sample = 8;
inline constexpr double tau_clip = 1e-6;

/// Rank-based fit: Kendall's tau, clipped to +/-(1 - 1e-6), then inverted.
FittedCopula fit_copula(std::span<const double> x, std::span<const double> y, CopulaFamily family,
                        double nu = default_student_nu);

} // namespace cyclocopula
