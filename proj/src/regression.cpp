#include "cyclocopula/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

RegressionMode parse_regression_mode(std::string_view name) {
    if (name == "linear") {
        return RegressionMode::linear;
    }
    if (name == "curve") {
        return RegressionMode::curve;
    }
    throw UsageError("unknown regression mode '" + std::string(name) + "' (expected linear|curve)");
}

double ConditionalCurve::at(double value) const {
    if (x.empty()) {
        throw UsageError("empty conditional-mean curve");
    }
    if (value <= x.front()) {
        return mean.front();
    }
    if (value >= x.back()) {
        return mean.back();
    }
    const auto it = std::upper_bound(x.begin(), x.end(), value);
    const auto hi = static_cast<std::size_t>(it - x.begin());
    const auto lo = hi - 1;
    const double w = (value - x[lo]) / (x[hi] - x[lo]);
    return mean[lo] + w * (mean[hi] - mean[lo]);
}

ConditionalCurve conditional_mean_curve(const FittedCopula& fitted, std::span<const double> x_grid) {
    if (x_grid.empty()) {
        throw UsageError("conditional_mean_curve: empty grid");
    }
    for (std::size_t i = 1; i < x_grid.size(); ++i) {
        if (!(x_grid[i] > x_grid[i - 1])) {
            throw UsageError("conditional_mean_curve: grid must be strictly increasing");
        }
    }
    if (x_grid.front() < fitted.x_marginal.min() || x_grid.back() > fitted.x_marginal.max()) {
        throw UsageError("conditional_mean_curve: grid leaves the observed x range");
    }

    const auto ys = fitted.y_marginal.sorted();
    const std::size_t m = ys.size();
    std::vector<double> edges(m - 1);
    for (std::size_t k = 1; k < m; ++k) {
        edges[k - 1] = static_cast<double>(k) / static_cast<double>(m);
    }
    const ConditionalGrid grid(fitted.family, fitted.params, edges);

    ConditionalCurve curve;
    curve.x.assign(x_grid.begin(), x_grid.end());
    curve.mean.reserve(x_grid.size());
    std::vector<double> h(m - 1);
    for (double xv : x_grid) {
        grid.evaluate(fitted.x_marginal.cdf(xv), h);
        double total = 0.0;
        double prev = 0.0;
        for (std::size_t k = 0; k + 1 < m; ++k) {
            const double mass = std::max(h[k] - prev, 0.0);
            total += ys[k] * mass;
            prev = std::max(prev, h[k]);
        }
        total += ys[m - 1] * (1.0 - prev);
        curve.mean.push_back(total);
    }
    return curve;
}

PhaseModel fit_phase_regression(std::span<const double> x, std::span<const double> y, CopulaFamily family,
                                std::size_t phase, double nu) {
    if (x.size() != y.size()) {
        throw UsageError("fit_phase_regression: x and y differ in length");
    }
    auto fitted = fit_copula(x, y, family, nu);

    std::vector<double> grid(x.begin(), x.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (grid.size() < 2) {
        throw DataError("fit_phase_regression: all x values are equal");
    }
    auto curve = conditional_mean_curve(fitted, grid);

    // least squares through (x_j, curve(x_j)) at every observed point
    const double m = static_cast<double>(x.size());
    const double x_mean = std::accumulate(x.begin(), x.end(), 0.0) / m;
    std::vector<double> fitted_y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        const auto it = std::lower_bound(grid.begin(), grid.end(), x[j]);
        fitted_y[j] = curve.mean[static_cast<std::size_t>(it - grid.begin())];
    }
    const double anchor = fitted_y.front();
    double sxx = 0.0;
    double sxy = 0.0;
    double y_offset = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double dx = x[j] - x_mean;
        // centring on the first target makes a constant curve give b1 = 0 exactly
        const double dy = fitted_y[j] - anchor;
        sxx += dx * dx;
        sxy += dx * dy;
        y_offset += dy;
    }
    const double b1 = sxy / sxx;
    const double b0 = anchor + y_offset / m - b1 * x_mean;
    if (!std::isfinite(b0) || !std::isfinite(b1)) {
        throw NumericalError("fit_phase_regression: non-finite coefficients");
    }
    return PhaseModel{phase, b0, b1, std::move(fitted), std::move(curve)};
}

namespace {

[[noreturn]] void rethrow_for_phase(std::size_t phase) {
    const std::string prefix = "phase " + std::to_string(phase) + ": ";
    try {
        throw;
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const UsageError& e) {
        throw UsageError(prefix + e.what());
    }
}

} // namespace

CycloModel fit_cyclo_model(std::span<const double> x, std::span<const double> y, std::size_t period,
                           CopulaFamily family, double nu) {
    if (x.size() != y.size()) {
        throw UsageError("fit_cyclo_model: x and y differ in length");
    }
    const auto x_phases = split_phases(x, period);
    const auto y_phases = split_phases(y, period);
    if (x_phases.repetitions() < min_fit_sample) {
        throw DataError("fit_cyclo_model: n/T = " + std::to_string(x_phases.repetitions()) +
                        " values per phase, need at least " + std::to_string(min_fit_sample));
    }
    CycloModel model{period, family, {}};
    model.phases.reserve(period);
    for (std::size_t i = 1; i <= period; ++i) {
        try {
            model.phases.push_back(fit_phase_regression(x_phases.phase(i), y_phases.phase(i), family, i, nu));
        } catch (const Error&) {
            rethrow_for_phase(i);
        }
    }
    return model;
}

CycloModel fit_cyclo_model(const TimeSeries& x, const TimeSeries& y, std::size_t period, CopulaFamily family,
                           double nu) {
    return fit_cyclo_model(x.values(), y.values(), period, family, nu);
}

double predict(const CycloModel& model, double x, long t, RegressionMode mode) {
    if (t < 1) {
        throw UsageError("predict: time index must be >= 1");
    }
    const auto period = static_cast<long>(model.period);
    const auto& phase = model.phases.at(static_cast<std::size_t>((t - 1) % period));
    return mode == RegressionMode::linear ? phase.b0 + phase.b1 * x : phase.curve.at(x);
}

std::vector<double> predict_series(const CycloModel& model, std::span<const double> x, RegressionMode mode) {
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        out[j] = predict(model, x[j], static_cast<long>(j + 1), mode);
    }
    return out;
}

} // namespace cyclocopula
