#pragma once

#include <functional>

#include <Eigen/Dense>

// Independent numeric oracles for test assertions. Nothing here touches the
// library's own normal, solver, or RNG code paths.
namespace oracle {

// erf via Maclaurin series for |x| <= 2, Legendre continued fraction for the
// complement beyond (modified Lentz).
double erf_value(double x);
double erfc_value(double x);

double normal_cdf(double x);

// Bisection on normal_cdf to an interval of width 1e-13.
double normal_quantile(double q);

// Golden-section minimizer of a unimodal scalar function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi, double tol);

// Central finite differences.
Eigen::VectorXd finite_diff_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                     const Eigen::VectorXd& x, double h);

// Dense least squares through a rank-revealing QR; independent of the
// coordinate-descent path.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

}  // namespace oracle
