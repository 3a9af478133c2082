#include "cyclocopula/copula.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "cyclocopula/distributions.hpp"
#include "cyclocopula/error.hpp"

namespace cyclocopula {

namespace {

constexpr double pi = std::numbers::pi;

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void check_unit(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw UsageError(std::string(name) + " must lie in [0, 1], got " + std::to_string(x));
    }
}

void check_open_unit(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0)) {
        throw UsageError(std::string(name) + " must lie in (0, 1), got " + std::to_string(x));
    }
}

// ---- Gaussian / Student t -------------------------------------------------

double elliptical_h(CopulaFamily family, const CopulaParams& p, double v, double u) {
    const double rho = p.theta;
    if (rho == 1.0) {
        return v >= u ? 1.0 : 0.0;
    }
    if (rho == -1.0) {
        return v >= 1.0 - u ? 1.0 : 0.0;
    }
    if (family == CopulaFamily::gaussian) {
        const double z = (normal_quantile(v) - rho * normal_quantile(u)) / std::sqrt(1.0 - rho * rho);
        return normal_cdf(z);
    }
    const double nu = *p.nu;
    const double xu = student_t_quantile(u, nu);
    const double xv = student_t_quantile(v, nu);
    const double scale = std::sqrt((nu + xu * xu) * (1.0 - rho * rho) / (nu + 1.0));
    return student_t_cdf((xv - rho * xu) / scale, nu + 1.0);
}

// ---- Clayton --------------------------------------------------------------

double clayton_cdf(double theta, double a, double b) {
    if (theta > 0.0) {
        // a (1 + (a/b)^theta - a^theta)^(-1/theta), overflow-free for large theta
        const double ratio = std::exp(theta * std::log(a / b));
        const double base = ratio - std::pow(a, theta);
        return a * std::exp(-std::log1p(base) / theta);
    }
    const double base = std::pow(a, -theta) + std::pow(b, -theta) - 1.0;
    return base <= 0.0 ? 0.0 : std::pow(base, -1.0 / theta);
}

double clayton_h(double theta, double v, double u) {
    if (theta > 0.0) {
        const double ratio = std::exp(theta * std::log(u / v));
        const double base = ratio - std::pow(u, theta);
        return std::exp(-(1.0 + 1.0 / theta) * std::log1p(base));
    }
    const double base = std::pow(u, -theta) + std::pow(v, -theta) - 1.0;
    if (base <= 0.0) {
        return 0.0;
    }
    return std::pow(u, -theta - 1.0) * std::pow(base, -1.0 - 1.0 / theta);
}

// ---- Gumbel ---------------------------------------------------------------

// A^(1/theta) with A = x^theta + y^theta, x, y > 0.
double gumbel_norm(double theta, double x, double y) {
    const double hi = std::max(x, y);
    const double lo = std::min(x, y);
    return hi * std::exp(std::log1p(std::pow(lo / hi, theta)) / theta);
}

double gumbel_cdf(double theta, double a, double b) {
    return std::exp(-gumbel_norm(theta, -std::log(a), -std::log(b)));
}

double gumbel_h(double theta, double v, double u) {
    const double x = -std::log(u);
    const double y = -std::log(v);
    const double s = gumbel_norm(theta, x, y);
    return std::exp(-s) / u * std::exp((theta - 1.0) * std::log(x / s));
}

// ---- Frank ----------------------------------------------------------------

double frank_cdf_positive(double theta, double a, double b) {
    if (a > b) {
        std::swap(a, b);
    }
    const double bracket = -std::expm1(-theta * b) - std::exp(-theta * (b - a)) * std::expm1(-theta * (1.0 - b));
    return a - (std::log(bracket) - std::log(-std::expm1(-theta))) / theta;
}

double frank_cdf(double theta, double a, double b) {
    if (theta > 0.0) {
        return frank_cdf_positive(theta, a, b);
    }
    // negative dependence is the reflection C_theta(a, b) = a - C_{-theta}(a, 1 - b)
    return a - frank_cdf_positive(-theta, a, 1.0 - b);
}

double frank_h_positive(double theta, double v, double u) {
    const double lower = -std::expm1(-theta * v);
    const double upper = std::exp(theta * (u - v)) * -std::expm1(-theta * (1.0 - v));
    return lower / (lower + upper);
}

double frank_h(double theta, double v, double u) {
    if (theta > 0.0) {
        return frank_h_positive(theta, v, u);
    }
    return 1.0 - frank_h_positive(-theta, 1.0 - v, u);
}

// ---- Debye ----------------------------------------------------------------

double debye_integrand(int k, double t) {
    if (t == 0.0) {
        return k == 1 ? 1.0 : 0.0;
    }
    return std::pow(t, k) / std::expm1(t);
}

double simpson_step(const std::function<double(double)>& f, double a, double b, double fa, double fm, double fb,
                    double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_step(f, a, b, fa, fm, fb, whole, tol, 48);
}

double frank_tau(double theta) {
    return 1.0 + 4.0 * (debye(1, theta) - 1.0) / theta;
}

} // namespace

std::string_view to_string(CopulaFamily family) {
    switch (family) {
    case CopulaFamily::gaussian:
        return "gaussian";
    case CopulaFamily::student_t:
        return "t";
    case CopulaFamily::clayton:
        return "clayton";
    case CopulaFamily::gumbel:
        return "gumbel";
    case CopulaFamily::frank:
        return "frank";
    }
    return "unknown";
}

CopulaFamily parse_family(std::string_view name) {
    const auto s = lower(name);
    if (s == "gaussian" || s == "normal") {
        return CopulaFamily::gaussian;
    }
    if (s == "t" || s == "student_t" || s == "student-t" || s == "student") {
        return CopulaFamily::student_t;
    }
    if (s == "clayton") {
        return CopulaFamily::clayton;
    }
    if (s == "gumbel") {
        return CopulaFamily::gumbel;
    }
    if (s == "frank") {
        return CopulaFamily::frank;
    }
    throw UsageError("unknown copula family '" + std::string(name) + "'");
}

void validate(CopulaFamily family, const CopulaParams& p) {
    const double theta = p.theta;
    const std::string name(to_string(family));
    if (!std::isfinite(theta)) {
        throw UsageError(name + " copula: theta must be finite");
    }
    if (family == CopulaFamily::student_t) {
        if (!p.nu || !(*p.nu > 0.0)) {
            throw UsageError("t copula: nu must be present and positive");
        }
    } else if (p.nu) {
        throw UsageError(name + " copula takes no nu parameter");
    }
    switch (family) {
    case CopulaFamily::gaussian:
    case CopulaFamily::student_t:
        if (theta < -1.0 || theta > 1.0) {
            throw UsageError(name + " copula: theta must lie in [-1, 1], got " + std::to_string(theta));
        }
        break;
    case CopulaFamily::clayton:
        if (theta < -1.0 || theta == 0.0) {
            throw UsageError("clayton copula: theta must satisfy theta >= -1, theta != 0, got " +
                             std::to_string(theta));
        }
        break;
    case CopulaFamily::gumbel:
        if (theta < 1.0) {
            throw UsageError("gumbel copula: theta must be >= 1, got " + std::to_string(theta));
        }
        break;
    case CopulaFamily::frank:
        if (theta == 0.0) {
            throw UsageError("frank copula: theta must be nonzero");
        }
        break;
    }
}

CopulaParams make_params(CopulaFamily family, double theta, double nu) {
    CopulaParams p{theta, family == CopulaFamily::student_t ? std::optional<double>(nu) : std::nullopt};
    validate(family, p);
    return p;
}

double copula_cdf(CopulaFamily family, const CopulaParams& params, double a, double b) {
    validate(family, params);
    check_unit(a, "a");
    check_unit(b, "b");
    if (a == 0.0 || b == 0.0) {
        return 0.0;
    }
    if (a == 1.0) {
        return b;
    }
    if (b == 1.0) {
        return a;
    }
    double c = 0.0;
    switch (family) {
    case CopulaFamily::gaussian:
        c = bivariate_normal_cdf(normal_quantile(a), normal_quantile(b), params.theta);
        break;
    case CopulaFamily::student_t:
        c = bivariate_t_cdf(student_t_quantile(a, *params.nu), student_t_quantile(b, *params.nu), params.theta,
                            *params.nu);
        break;
    case CopulaFamily::clayton:
        c = clayton_cdf(params.theta, a, b);
        break;
    case CopulaFamily::gumbel:
        c = gumbel_cdf(params.theta, a, b);
        break;
    case CopulaFamily::frank:
        c = frank_cdf(params.theta, a, b);
        break;
    }
    return c;
}

double conditional_h(CopulaFamily family, const CopulaParams& params, double v, double u) {
    validate(family, params);
    check_open_unit(u, "u");
    check_unit(v, "v");
    if (v == 0.0) {
        return 0.0;
    }
    if (v == 1.0) {
        return 1.0;
    }
    double h = 0.0;
    switch (family) {
    case CopulaFamily::gaussian:
    case CopulaFamily::student_t:
        h = elliptical_h(family, params, v, u);
        break;
    case CopulaFamily::clayton:
        h = clayton_h(params.theta, v, u);
        break;
    case CopulaFamily::gumbel:
        h = gumbel_h(params.theta, v, u);
        break;
    case CopulaFamily::frank:
        h = frank_h(params.theta, v, u);
        break;
    }
    return std::clamp(h, 0.0, 1.0);
}

double inverse_h_numeric(CopulaFamily family, const CopulaParams& params, double w, double u) {
    check_open_unit(w, "w");
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (conditional_h(family, params, mid, u) < w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

namespace {

// log(a + b exp(c)) for a, b >= 0 without overflow
double log_mix(double a, double b, double c) {
    if (b == 0.0) {
        return std::log(a);
    }
    if (a == 0.0) {
        return std::log(b) + c;
    }
    if (c > 0.0) {
        return c + std::log(a * std::exp(-c) + b);
    }
    return std::log(a + b * std::exp(c));
}

} // namespace

double inverse_h(CopulaFamily family, const CopulaParams& params, double w, double u) {
    validate(family, params);
    check_open_unit(u, "u");
    check_open_unit(w, "w");
    const double theta = params.theta;
    switch (family) {
    case CopulaFamily::gaussian:
        if (std::abs(theta) == 1.0) {
            return theta > 0 ? u : 1.0 - u;
        }
        return normal_cdf(theta * normal_quantile(u) + std::sqrt(1.0 - theta * theta) * normal_quantile(w));
    case CopulaFamily::student_t: {
        if (std::abs(theta) == 1.0) {
            return theta > 0 ? u : 1.0 - u;
        }
        const double nu = *params.nu;
        const double xu = student_t_quantile(u, nu);
        const double scale = std::sqrt((nu + xu * xu) * (1.0 - theta * theta) / (nu + 1.0));
        return student_t_cdf(theta * xu + scale * student_t_quantile(w, nu + 1.0), nu);
    }
    case CopulaFamily::clayton:
        if (theta > 0.0) {
            const double log_term = -theta * std::log(u) + std::log(std::expm1(-theta / (1.0 + theta) * std::log(w)));
            return std::exp(-std::log1p(std::exp(log_term)) / theta);
        }
        return inverse_h_numeric(family, params, w, u);
    case CopulaFamily::frank: {
        const double num = log_mix(1.0 - w, w, -theta * (1.0 - u));
        const double den = log_mix(w, 1.0 - w, -theta * u);
        return std::clamp(u - (num - den) / theta, 0.0, 1.0);
    }
    case CopulaFamily::gumbel:
        return inverse_h_numeric(family, params, w, u);
    }
    return inverse_h_numeric(family, params, w, u);
}

ConditionalGrid::ConditionalGrid(CopulaFamily family, CopulaParams params, std::span<const double> v_grid)
    : family_(family), params_(std::move(params)), v_(v_grid.begin(), v_grid.end()) {
    validate(family_, params_);
    for (double v : v_) {
        check_unit(v, "v");
    }
    if (family_ == CopulaFamily::gaussian) {
        for (double v : v_) {
            transformed_.push_back(normal_quantile(v));
        }
    } else if (family_ == CopulaFamily::student_t) {
        for (double v : v_) {
            transformed_.push_back(student_t_quantile(v, *params_.nu));
        }
    }
}

void ConditionalGrid::evaluate(double u, std::span<double> out) const {
    check_open_unit(u, "u");
    if (out.size() != v_.size()) {
        throw UsageError("ConditionalGrid: output size mismatch");
    }
    const double rho = params_.theta;
    const bool elliptical = family_ == CopulaFamily::gaussian || family_ == CopulaFamily::student_t;
    if (!elliptical || std::abs(rho) == 1.0) {
        for (std::size_t k = 0; k < v_.size(); ++k) {
            out[k] = conditional_h(family_, params_, v_[k], u);
        }
        return;
    }
    if (family_ == CopulaFamily::gaussian) {
        const double shift = rho * normal_quantile(u);
        const double scale = std::sqrt(1.0 - rho * rho);
        for (std::size_t k = 0; k < v_.size(); ++k) {
            out[k] = normal_cdf((transformed_[k] - shift) / scale);
        }
        return;
    }
    const double nu = *params_.nu;
    const double xu = student_t_quantile(u, nu);
    const double shift = rho * xu;
    const double scale = std::sqrt((nu + xu * xu) * (1.0 - rho * rho) / (nu + 1.0));
    if (nu == std::floor(nu) && nu < 200.0) {
        const int dof = static_cast<int>(nu) + 1;
        for (std::size_t k = 0; k < v_.size(); ++k) {
            out[k] = student_t_cdf_integer((transformed_[k] - shift) / scale, dof);
        }
        return;
    }
    for (std::size_t k = 0; k < v_.size(); ++k) {
        out[k] = student_t_cdf((transformed_[k] - shift) / scale, nu + 1.0);
    }
}

double debye(int k, double alpha) {
    if (k != 1 && k != 2) {
        throw UsageError("debye: k must be 1 or 2");
    }
    if (alpha == 0.0 || !std::isfinite(alpha)) {
        throw UsageError("debye: alpha must be finite and nonzero");
    }
    // beyond |t| = 100 the positive-side integrand is below 1e-39
    constexpr double cutoff = 100.0;
    if (alpha < -cutoff) {
        // D_k(-x) = D_k(x) + k x / (k + 1)
        const double x = -alpha;
        return debye(k, x) + k * x / (k + 1.0);
    }
    const double upper = std::min(alpha, cutoff);
    const auto f = [k](double t) { return debye_integrand(k, t); };
    const double integral = adaptive_simpson(f, 0.0, upper, 1e-14);
    return k / std::pow(alpha, k) * integral;
}

double tau_from_theta(CopulaFamily family, const CopulaParams& params) {
    validate(family, params);
    const double theta = params.theta;
    switch (family) {
    case CopulaFamily::gaussian:
    case CopulaFamily::student_t:
        return 2.0 / pi * std::asin(theta);
    case CopulaFamily::clayton:
        return theta / (theta + 2.0);
    case CopulaFamily::gumbel:
        return 1.0 - 1.0 / theta;
    case CopulaFamily::frank:
        return std::clamp(frank_tau(theta), -1.0, 1.0);
    }
    return 0.0;
}

CopulaParams theta_from_tau(CopulaFamily family, double tau, double nu) {
    const auto out_of_range = [&](const char* range) {
        return DataError(std::string(to_string(family)) + " copula cannot attain tau=" + std::to_string(tau) +
                         "; attainable range is " + range);
    };
    switch (family) {
    case CopulaFamily::gaussian:
    case CopulaFamily::student_t:
        if (!(tau > -1.0 && tau < 1.0)) {
            throw out_of_range("(-1, 1)");
        }
        return make_params(family, std::sin(pi * tau / 2.0), nu);
    case CopulaFamily::clayton:
        if (!(tau > 0.0 && tau < 1.0)) {
            throw out_of_range("(0, 1)");
        }
        return make_params(family, 2.0 * tau / (1.0 - tau));
    case CopulaFamily::gumbel:
        if (!(tau >= 0.0 && tau < 1.0)) {
            throw out_of_range("[0, 1)");
        }
        return make_params(family, 1.0 / (1.0 - tau));
    case CopulaFamily::frank: {
        if (!(tau > -1.0 && tau < 1.0) || tau == 0.0) {
            throw out_of_range("(-1, 0) U (0, 1)");
        }
        // tau(theta) is odd and increasing; solve for |tau| on theta > 0
        const double target = std::abs(tau);
        double lo = 0.0;
        double hi = 1.0;
        while (frank_tau(hi) < target) {
            hi *= 2.0;
            if (hi > 1e12) {
                throw NumericalError("frank tau inversion failed to bracket tau=" + std::to_string(tau));
            }
        }
        double mid = 0.5 * (lo + hi);
        for (int i = 0; i < 200; ++i) {
            mid = 0.5 * (lo + hi);
            const double t = frank_tau(mid);
            if (std::abs(t - target) < 1e-8) {
                break;
            }
            (t < target ? lo : hi) = mid;
        }
        return make_params(family, tau > 0 ? mid : -mid);
    }
    }
    throw UsageError("unknown family");
}

std::vector<std::pair<double, double>> sample_copula(CopulaFamily family, const CopulaParams& params, std::size_t m,
                                                     Rng& rng) {
    validate(family, params);
    std::vector<std::pair<double, double>> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double u = open_unit(rng);
        const double w = open_unit(rng);
        out.emplace_back(u, inverse_h(family, params, w, u));
    }
    return out;
}

FittedCopula fit_copula(std::span<const double> x, std::span<const double> y, CopulaFamily family, double nu) {
    if (x.size() != y.size()) {
        throw UsageError("fit_copula: x and y differ in length");
    }
    if (x.size() < min_fit_sample) {
        throw DataError("fit_copula needs at least " + std::to_string(min_fit_sample) + " pairs, got " +
                        std::to_string(x.size()));
    }
    const double tau_hat = kendall_tau(x, y);
    const double tau = std::clamp(tau_hat, -(1.0 - tau_clip), 1.0 - tau_clip);
    auto params = theta_from_tau(family, tau, nu);
    return FittedCopula{family, params, tau_hat, EmpiricalMarginal(x), EmpiricalMarginal(y)};
}

} // namespace cyclocopula
