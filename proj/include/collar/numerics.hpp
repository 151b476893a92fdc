#pragma once

#include <functional>
#include <optional>

namespace collar::numerics {

using ScalarFn = std::function<double(double)>;

/// Adaptive quadrature of fn over [a, b] (a <= b). Relative tolerance on the
/// estimate with an absolute floor, so integrals that vanish still terminate.
double integrate(const ScalarFn& fn, double a, double b, double tol = 1e-11);

struct ArgMax {
  double arg;
  double value;
};

/// sup of fn over [a, b] (or [a, b) when include_b is false): uniform scan with
/// `points` samples, then a bracketed Brent refinement around the best sample.
ArgMax scan_and_refine_max(const ScalarFn& fn, double a, double b,
                           int points = 4096, bool include_b = true);

/// First positive root of fn on (0, t_max]: scan outward from `step`
/// doubling the abscissa until fn changes sign, then bisect to `abs_tol`.
std::optional<double> first_positive_root(const ScalarFn& fn, double t_max,
                                          double step = 1e-3,
                                          double abs_tol = 1e-13);

/// Bisection on a sign-changing bracket [lo, hi].
double bisect_root(const ScalarFn& fn, double lo, double hi, double abs_tol);

}  // namespace collar::numerics

#include <Eigen/Core>

namespace collar::numerics {

struct Derivatives {
  Eigen::VectorXd first;
  Eigen::VectorXd second;
};

/// First and second derivatives of uniformly spaced samples by 5-point
/// stencils: central in the interior, one-sided 5-point at the two nodes
/// nearest each end. Requires at least 5 samples.
Derivatives five_point_derivatives(const Eigen::VectorXd& values, double spacing);

/// Composite Simpson on uniformly spaced samples (trapezoid on a trailing
/// odd interval).
double simpson(const Eigen::VectorXd& values, double spacing);

}  // namespace collar::numerics
