#include "cyclocopula/distributions.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Half-rules of the 6, 12 and 20 point Gauss-Legendre formulas on [-1, 1]
// (negative nodes only; the positive half is mirrored in the sums).
constexpr std::array<double, 3> gl6_x{-0.9324695142031522, -0.6612093864662647, -0.2386191860831970};
constexpr std::array<double, 3> gl6_w{0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 6> gl12_x{-0.9815606342467191, -0.9041172563704750, -0.7699026741943050,
                                       -0.5873179542866171, -0.3678314989981802, -0.1252334085114692};
constexpr std::array<double, 6> gl12_w{0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                       0.2031674267230659, 0.2334925365383547, 0.2491470458134029};
constexpr std::array<double, 10> gl20_x{-0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
                                        -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
                                        -0.5108670019508271, -0.3737060887154196, -0.2277858511416451,
                                        -0.07652652113349733};
constexpr std::array<double, 10> gl20_w{0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                        0.08327674157670475, 0.1019301198172404, 0.1181945319615184,
                                        0.1316886384491766, 0.1420961093183821, 0.1491729864726037,
                                        0.1527533871307259};

template <std::size_t N>
double upper_orthant(double h, double k, double r, const std::array<double, N>& xs, const std::array<double, N>& ws) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double hk = h * k;
    double bvn = 0.0;
    if (std::abs(r) < 0.925) {
        const double hs = (h * h + k * k) / 2.0;
        const double asr = std::asin(r);
        for (std::size_t i = 0; i < N; ++i) {
            double sn = std::sin(asr * (1.0 - xs[i]) / 2.0);
            bvn += ws[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            sn = std::sin(asr * (1.0 + xs[i]) / 2.0);
            bvn += ws[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
        }
        return bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
    }

    double kk = k;
    double hkk = hk;
    if (r < 0.0) {
        kk = -k;
        hkk = -hk;
    }
    if (std::abs(r) < 1.0) {
        const double as = (1.0 - r) * (1.0 + r);
        double a = std::sqrt(as);
        const double bs = (h - kk) * (h - kk);
        const double c = (4.0 - hkk) / 8.0;
        const double d = (12.0 - hkk) / 16.0;
        double asr = -(bs / as + hkk) / 2.0;
        if (asr > -100.0) {
            bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
        }
        if (hkk > -100.0) {
            const double b = std::sqrt(bs);
            const double sp = std::sqrt(two_pi) * normal_cdf(-b / a);
            bvn -= std::exp(-hkk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
        }
        a /= 2.0;
        for (std::size_t i = 0; i < N; ++i) {
            for (const double sign : {-1.0, 1.0}) {
                double xs2 = a + a * sign * xs[i];
                xs2 *= xs2;
                const double rs = std::sqrt(1.0 - xs2);
                asr = -(bs / xs2 + hkk) / 2.0;
                if (asr > -100.0) {
                    const double sp = 1.0 + c * xs2 * (1.0 + d * xs2);
                    const double ep = std::exp(-hkk * xs2 / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
                    bvn += a * ws[i] * std::exp(asr) * (ep - sp);
                }
            }
        }
        bvn = -bvn / two_pi;
    }
    if (r > 0.0) {
        return bvn + normal_cdf(-std::max(h, kk));
    }
    if (h >= kk) {
        return -bvn;
    }
    const double l = h < 0.0 ? normal_cdf(kk) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-kk);
    return l - bvn;
}

// P(X > h, Y > k)
double bvnu(double h, double k, double r) {
    if (h == inf || k == inf) {
        return 0.0;
    }
    if (h == -inf) {
        return k == -inf ? 1.0 : normal_cdf(-k);
    }
    if (k == -inf) {
        return normal_cdf(-h);
    }
    double p;
    if (std::abs(r) < 0.3) {
        p = upper_orthant(h, k, r, gl6_x, gl6_w);
    } else if (std::abs(r) < 0.75) {
        p = upper_orthant(h, k, r, gl12_x, gl12_w);
    } else {
        p = upper_orthant(h, k, r, gl20_x, gl20_w);
    }
    return std::clamp(p, 0.0, 1.0);
}

} // namespace

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (p <= 0.0) {
        return -inf;
    }
    if (p >= 1.0) {
        return inf;
    }
    return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double student_t_cdf(double x, double nu) {
    if (std::isinf(x)) {
        return x > 0 ? 1.0 : 0.0;
    }
    return boost::math::cdf(boost::math::students_t_distribution<double>(nu), x);
}

double student_t_cdf_integer(double x, int nu) {
    if (nu < 1) {
        throw UsageError("degrees of freedom must be a positive integer");
    }
    if (std::isinf(x)) {
        return x > 0 ? 1.0 : 0.0;
    }
    const double dof = nu;
    const double r = dof + x * x;
    const double c = dof / r;
    const double s = x / std::sqrt(r);
    double a = 0.0;
    if (nu % 2 == 0) {
        double term = 1.0;
        double sum = 1.0;
        for (int j = 1; j < nu / 2; ++j) {
            term *= c * (2.0 * j - 1.0) / (2.0 * j);
            sum += term;
        }
        a = s * sum;
    } else {
        const double theta = std::atan(x / std::sqrt(dof));
        double sum = 0.0;
        if (nu > 1) {
            double term = 1.0;
            sum = 1.0;
            for (int j = 1; j <= (nu - 3) / 2; ++j) {
                term *= c * (2.0 * j) / (2.0 * j + 1.0);
                sum += term;
            }
            sum *= s * std::sqrt(c);
        }
        a = 2.0 / std::numbers::pi * (theta + sum);
    }
    return std::clamp(0.5 * (1.0 + a), 0.0, 1.0);
}

double student_t_quantile(double p, double nu) {
    if (p <= 0.0) {
        return -inf;
    }
    if (p >= 1.0) {
        return inf;
    }
    return boost::math::quantile(boost::math::students_t_distribution<double>(nu), p);
}

double bivariate_normal_cdf(double x, double y, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw UsageError("correlation must lie in [-1, 1]");
    }
    if (rho == 1.0) {
        return normal_cdf(std::min(x, y));
    }
    if (rho == -1.0) {
        return std::max(normal_cdf(x) - normal_cdf(-y), 0.0);
    }
    return bvnu(-x, -y, rho);
}

double bivariate_t_cdf(double x, double y, double rho, double nu) {
    if (!(rho >= -1.0 && rho <= 1.0)) {
        throw UsageError("correlation must lie in [-1, 1]");
    }
    if (!(nu > 0.0)) {
        throw UsageError("degrees of freedom must be positive");
    }
    const double fx = student_t_cdf(x, nu);
    const double fy = student_t_cdf(y, nu);
    if (fx <= 0.0 || fy <= 0.0) {
        return 0.0;
    }
    if (rho == 1.0) {
        return std::min(fx, fy);
    }
    if (rho == -1.0) {
        return std::max(fx + fy - 1.0, 0.0);
    }
    if (fy >= 1.0) {
        return fx;
    }
    // Condition on X = s = sqrt(nu) tan(a): the t density becomes
    // cos(a)^(nu - 1) / B(1/2, nu/2) and Y | X is a scaled t with nu + 1
    // degrees of freedom.
    const double norm = 1.0 / boost::math::beta(0.5, 0.5 * nu);
    const double root_nu = std::sqrt(nu);
    const double scale = std::sqrt(nu * (1.0 - rho * rho) / (nu + 1.0));
    auto integrand = [&](double a) {
        const double c = std::cos(a);
        const double z = (y * c - rho * root_nu * std::sin(a)) / scale;
        return norm * std::pow(c, nu - 1.0) * student_t_cdf(z, nu + 1.0);
    };
    thread_local boost::math::quadrature::tanh_sinh<double> rule;
    const double upper = std::isinf(x) ? std::numbers::pi / 2 : std::atan(x / root_nu);
    const double value = rule.integrate(integrand, -std::numbers::pi / 2, upper, 1e-14);
    return std::clamp(value, 0.0, fx);
}

} // namespace cyclocopula
