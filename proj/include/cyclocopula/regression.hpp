#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cyclocopula/copula.hpp"
#include "cyclocopula/cyclo_sim.hpp"

namespace cyclocopula {

/// Copula regression produces E[Y | X = x] on a grid; the linear form
/// y = b0 + b1 x is its least-squares summary.
enum class RegressionMode { linear, curve };

RegressionMode parse_regression_mode(std::string_view name);

/// Sampled conditional-mean curve. Between grid points the curve is
/// interpolated linearly; outside the grid it is held at the end values.
struct ConditionalCurve {
    std::vector<double> x; ///< strictly increasing
    std::vector<double> mean;

    double at(double value) const;
};

struct PhaseModel {
    std::size_t phase; ///< 1-based
    double b0;
    double b1;
    FittedCopula fitted;
    ConditionalCurve curve;
};

struct CycloModel {
    std::size_t period;
    CopulaFamily family;
    std::vector<PhaseModel> phases; ///< phases[i - 1] is phase i
};

/// E[Y | X = x] = int_0^1 G^{-1}(v) dh(v | F(x)) for each grid point.
///
/// G^{-1} is the empirical quantile of the y-sample with mass 1/m on each
/// order statistic, so the Stieltjes integral reduces exactly to
/// sum_k y_(k) [h(k/m | u) - h((k-1)/m | u)], with u = F(x) from the
/// x-marginal. Throws UsageError if the grid is empty, not strictly
/// increasing, or leaves the observed x range.
ConditionalCurve conditional_mean_curve(const FittedCopula& fitted, std::span<const double> x_grid);

/// Fits the copula of one phase, evaluates the conditional-mean curve at the
/// observed x values and summarises it by ordinary least squares.
PhaseModel fit_phase_regression(std::span<const double> x, std::span<const double> y, CopulaFamily family,
                                std::size_t phase = 1, double nu = default_student_nu);

/// Splits both series into `period` phases and fits one PhaseModel per phase.
/// Errors are rethrown with the failing phase index prepended.
CycloModel fit_cyclo_model(std::span<const double> x, std::span<const double> y, std::size_t period,
                           CopulaFamily family, double nu = default_student_nu);
CycloModel fit_cyclo_model(const TimeSeries& x, const TimeSeries& y, std::size_t period, CopulaFamily family,
                           double nu = default_student_nu);

/// Phase i = ((t - 1) mod T) + 1, then b0_i + b1_i x (or the phase curve).
double predict(const CycloModel& model, double x, long t, RegressionMode mode = RegressionMode::linear);

/// Predictions for x_1..x_n at times 1..n.
std::vector<double> predict_series(const CycloModel& model, std::span<const double> x,
                                   RegressionMode mode = RegressionMode::linear);

} // namespace cyclocopula
