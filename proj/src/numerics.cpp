#include "collar/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>

#include "collar/error.hpp"

namespace collar::numerics {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

struct Piece {
  double value;
  double error;
  double l1;
};

Piece rule(const ScalarFn& fn, double a, double b) {
  Piece p{0.0, 0.0, 0.0};
  p.value = Rule::integrate(fn, a, b, 0, 0.0, &p.error, &p.l1);
  // Boost leaves the error estimate in the [-1, 1] frame.
  p.error *= 0.5 * (b - a);
  return p;
}

// The error budget is absolute and shared out by width, so pieces where the
// integrand is negligible stop early even when their relative error never
// settles (rounding of the abscissae next to a zero of fn). Pieces already
// at rounding level stop as well; that level grows as the piece narrows
// relative to its position.
double adaptive(const ScalarFn& fn, double a, double b, const Piece& whole, double budget,
                int depth) {
  const double noise = 100.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + (std::abs(a) + std::abs(b)) / (b - a)) * whole.l1;
  if (depth == 0 || whole.error <= budget || whole.error <= noise) {
    return whole.value;
  }
  const double m = 0.5 * (a + b);
  return adaptive(fn, a, m, rule(fn, a, m), 0.5 * budget, depth - 1) +
         adaptive(fn, m, b, rule(fn, m, b), 0.5 * budget, depth - 1);
}

}  // namespace

double integrate(const ScalarFn& fn, double a, double b, double tol) {
  if (!(b > a)) return 0.0;
  const Piece whole = rule(fn, a, b);
  const double value = adaptive(fn, a, b, whole, tol * whole.l1, 24);
  if (!std::isfinite(value)) {
    throw Error(ErrorCode::IntegrationFailure, "quadrature produced a non-finite value");
  }
  return value;
}

ArgMax scan_and_refine_max(const ScalarFn& fn, double a, double b, int points,
                           bool include_b) {
  if (points < 2) points = 2;
  const double h = (b - a) / (include_b ? (points - 1) : points);
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double t = a + i * h;
    const double v = fn(t);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = std::max(a, a + (best - 1) * h);
  const double hi = std::min(include_b ? b : b - 1e-3 * h, a + (best + 1) * h);
  ArgMax result{a + best * h, best_value};
  if (hi > lo) {
    auto negated = [&](double t) { return -fn(t); };
    const auto [arg, neg] = boost::math::tools::brent_find_minima(
        negated, lo, hi, std::numeric_limits<double>::digits / 2);
    if (-neg > result.value) result = {arg, -neg};
  }
  return result;
}

double bisect_root(const ScalarFn& fn, double lo, double hi, double abs_tol) {
  double flo = fn(lo);
  while (hi - lo > abs_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = fn(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::optional<double> first_positive_root(const ScalarFn& fn, double t_max,
                                          double step, double abs_tol) {
  double prev_t = 0.0;
  double prev = fn(0.0);
  if (prev == 0.0) prev = fn(std::numeric_limits<double>::min());
  for (double t = step;; t *= 2.0) {
    const double tt = std::min(t, t_max);
    const double v = fn(tt);
    if (v == 0.0) return tt;
    if ((v < 0.0) != (prev < 0.0)) return bisect_root(fn, prev_t, tt, abs_tol);
    if (tt >= t_max) return std::nullopt;
    prev_t = tt;
    prev = v;
  }
}

}  // namespace collar::numerics

namespace collar::numerics {

Derivatives five_point_derivatives(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 5) {
    throw Error(ErrorCode::ProfileNotDifferentiable,
                "5-point stencils need at least 5 samples");
  }
  Derivatives d{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const double i12h = 1.0 / (12.0 * h);
  const double i12h2 = 1.0 / (12.0 * h * h);
  for (Eigen::Index i = 2; i + 2 < n; ++i) {
    d.first[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * i12h;
    d.second[i] =
        (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) * i12h2;
  }
  d.first[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * i12h;
  d.second[0] = (35.0 * f[0] - 104.0 * f[1] + 114.0 * f[2] - 56.0 * f[3] + 11.0 * f[4]) * i12h2;
  d.first[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * i12h;
  d.second[1] = (11.0 * f[0] - 20.0 * f[1] + 6.0 * f[2] + 4.0 * f[3] - f[4]) * i12h2;
  const Eigen::Index m = n - 1;
  d.first[m] =
      (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * i12h;
  d.second[m] =
      (35.0 * f[m] - 104.0 * f[m - 1] + 114.0 * f[m - 2] - 56.0 * f[m - 3] + 11.0 * f[m - 4]) *
      i12h2;
  d.first[m - 1] =
      (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * i12h;
  d.second[m - 1] =
      (11.0 * f[m] - 20.0 * f[m - 1] + 6.0 * f[m - 2] + 4.0 * f[m - 3] - f[m - 4]) * i12h2;
  return d;
}

double simpson(const Eigen::VectorXd& f, double h) {
  const Eigen::Index n = f.size();
  if (n < 2) return 0.0;
  const Eigen::Index intervals = n - 1;
  const Eigen::Index even = intervals - (intervals % 2);
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 2 <= even; i += 2) {
    sum += f[i] + 4.0 * f[i + 1] + f[i + 2];
  }
  sum *= h / 3.0;
  if (even < intervals) sum += 0.5 * h * (f[n - 2] + f[n - 1]);
  return sum;
}

}  // namespace collar::numerics
