#pragma once

namespace cyclocopula {

double normal_pdf(double x);
double normal_cdf(double x);
/// Inverse of normal_cdf; returns -inf / +inf at 0 / 1.
double normal_quantile(double p);

double student_t_cdf(double x, double nu);
double student_t_quantile(double p, double nu);

/// Student t CDF for integer degrees of freedom by the finite trigonometric
/// series. Absolute error near machine epsilon; relative accuracy in the far
/// lower tail is lost to cancellation.
double student_t_cdf_integer(double x, int nu);

/// P(X <= x, Y <= y) for a standard bivariate normal with correlation rho.
/// Drezner-Wesolowsky reduction with Genz's 6/12/20-point Gauss-Legendre
/// rules; absolute error below 1e-14 over the whole domain.
double bivariate_normal_cdf(double x, double y, double rho);

/// P(X <= x, Y <= y) for a standard bivariate t with correlation rho and
/// nu degrees of freedom, via the one-dimensional conditional reduction
/// integrated over the angle atan(s / sqrt(nu)) by tanh-sinh quadrature
/// (absolute error below 1e-12).
double bivariate_t_cdf(double x, double y, double rho, double nu);

} // namespace cyclocopula
