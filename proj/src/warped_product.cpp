#include "collar/warped_product.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "collar/error.hpp"
#include "collar/numerics.hpp"

namespace collar {

namespace {

void require_t(const WarpedManifold& M, double t) {
  if (!(t >= 0.0) || t > M.L() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange,
                "t = " + std::to_string(t) + " outside [0, L = " + std::to_string(M.L()) + "]");
  }
}

void require_effective_dimension(const WarpedManifold& M, double N) {
  if (!is_infinite_dimension(N) && !(N >= M.n())) {
    throw Error(ErrorCode::InvalidArgument, "effective dimension N must satisfy N >= n");
  }
}

}  // namespace

double unit_sphere_volume(int dim) {
  const double k = dim + 1.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k);
}

WarpedManifold build(int n, const FiberSpec& fiber, double L, Profile w, Profile f,
                     bool second_boundary) {
  if (n < 2) throw Error(ErrorCode::DimensionMismatch, "dimension n must be >= 2");
  if (fiber.dim != n - 1) {
    throw Error(ErrorCode::DimensionMismatch, "fiber dimension " + std::to_string(fiber.dim) +
                                                  " does not equal n - 1 = " +
                                                  std::to_string(n - 1));
  }
  if (!(fiber.total_volume > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "fiber volume must be positive");
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw Error(ErrorCode::InvalidArgument, "collar length L must be positive and finite");
  }
  for (const Profile* profile : {&w, &f}) {
    if (profile->is_sampled() &&
        (profile->domain_begin() > 1e-12 * L || profile->domain_end() < L * (1.0 - 1e-12))) {
      throw Error(ErrorCode::OutOfRange, "sampled profile does not cover [0, L]");
    }
  }
  constexpr int kScan = 4096;
  for (int i = 0; i < kScan; ++i) {
    const double t = L * i / kScan;
    const Jet wj = w(t);
    if (!(wj.v > 0.0) || !std::isfinite(wj.d1) || !std::isfinite(wj.d2)) {
      throw Error(ErrorCode::NonpositiveWarping,
                  "warping function must be positive on [0, L); fails at t = " +
                      std::to_string(t));
    }
    const Jet fj = f(t);
    if (!std::isfinite(fj.v) || !std::isfinite(fj.d1) || !std::isfinite(fj.d2)) {
      throw Error(ErrorCode::InvalidArgument,
                  "weight is not finite at t = " + std::to_string(t));
    }
  }
  WarpedManifold M;
  M.n_ = n;
  M.fiber_ = fiber;
  M.L_ = L;
  M.w_ = std::move(w);
  M.f_ = std::move(f);
  M.second_boundary_ = second_boundary;
  return M;
}

WarpedManifold make_rigidity_model(int n, double N, double kappa, double lambda, double L,
                                   double f0) {
  const ModelParams params{n, N, kappa, lambda};
  params.validate();
  if (is_infinite_dimension(N) && (kappa != 0.0 || lambda != 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "the N = inf model requires kappa = lambda = 0");
  }
  const double cbar = truncation_radius(kappa, lambda);
  if (!(L > 0.0) || L >= cbar) {
    throw Error(ErrorCode::OutOfRange, "rigidity model needs 0 < L < C_bar = " +
                                           std::to_string(cbar) + ", got L = " +
                                           std::to_string(L));
  }
  const FiberSpec fiber{n - 1, rigidity_fiber_constant(n, N, kappa, lambda),
                        unit_sphere_volume(n - 1)};
  const double excess = is_infinite_dimension(N) ? 0.0 : N - n;
  WarpedManifold M = build(n, fiber, L, Profile::jacobi(kappa, lambda),
                           Profile::log_jacobi(f0, excess, kappa, lambda), false);
  M.origin_ = ModelOrigin{params, f0};
  return M;
}

double rigidity_fiber_constant(int n, double N, double kappa, double lambda) {
  // With this constant the model has Ric^N_f = (N-1) kappa in every
  // direction, not only radially.
  const double c = kappa + lambda * lambda;
  if (n >= 3 && !is_infinite_dimension(N)) return c * (N - 2.0) / (n - 2.0);
  return c;
}

WarpedManifold make_product(int n, double L, double f0) {
  const FiberSpec fiber{n - 1, 1.0, unit_sphere_volume(n - 1)};
  WarpedManifold M = build(n, fiber, L, Profile::constant(1.0), Profile::constant(f0), false);
  M.origin_ = ModelOrigin{ModelParams{n, kInfiniteDimension, 0.0, 0.0}, f0};
  return M;
}

double theta_f(const WarpedManifold& M, double t) {
  require_t(M, t);
  const double ratio = M.warp().value(t) / M.warp().value(0.0);
  return std::exp(-M.weight().value(t)) * std::pow(ratio, M.n() - 1);
}

RicciComponents ricci_components(const WarpedManifold& M, double t) {
  require_t(M, t);
  const Jet w = M.warp()(t);
  const Jet f = M.weight()(t);
  const double n = M.n();
  const double kf = M.fiber().einstein_constant;
  return RicciComponents{
      -(n - 1.0) * w.d2 / w.v,
      -w.d2 / w.v + (n - 2.0) * (kf - w.d1 * w.d1) / (w.v * w.v),
      f.d2,
      f.d1 * w.d1 / w.v,
      f.d1,
  };
}

double bakry_emery_ricci(const WarpedManifold& M, double N, double t, Direction direction) {
  require_effective_dimension(M, N);
  if (!is_infinite_dimension(N) && N == M.n() && !M.weight().is_constant()) {
    throw Error(ErrorCode::NonconstantWeight,
                "Ric^N_f with N = n needs a constant weight (it is -inf otherwise)");
  }
  const RicciComponents c = ricci_components(M, t);
  if (direction == Direction::Fiber) return c.ric_fiber + c.hess_fiber;
  double value = c.ric_radial + c.hess_radial;
  if (!is_infinite_dimension(N) && N > M.n()) value -= c.df_radial * c.df_radial / (N - M.n());
  return value;
}

double weighted_mean_curvature(const WarpedManifold& M, BoundarySide side) {
  const double n = M.n();
  if (side == BoundarySide::Zero) {
    const Jet w = M.warp()(0.0);
    return -(n - 1.0) * w.d1 / w.v + M.weight()(0.0).d1;
  }
  if (!M.second_boundary()) {
    throw Error(ErrorCode::InvalidArgument, "t = L is not a boundary component of this manifold");
  }
  const Jet w = M.warp()(M.L());
  return (n - 1.0) * w.d1 / w.v - M.weight()(M.L()).d1;
}

double ricci_bound(double N, double kappa) {
  if (is_infinite_dimension(N)) {
    if (kappa != 0.0) {
      throw Error(ErrorCode::InvalidArgument, "N = inf comparisons use kappa = 0");
    }
    return 0.0;
  }
  return (N - 1.0) * kappa;
}

CurvatureReport curvature_margin(const WarpedManifold& M, double N, double kappa, int grid) {
  if (grid < 64) throw Error(ErrorCode::InvalidArgument, "curvature grid must be >= 64");
  const double bound = ricci_bound(N, kappa);
  CurvatureReport report;
  report.t = Eigen::VectorXd(grid);
  report.radial_samples = Eigen::VectorXd(grid);
  report.fiber_samples = Eigen::VectorXd(grid);
  for (int i = 0; i < grid; ++i) {
    const double t = M.L() * (i + 1.0) / (grid + 1.0);
    report.t[i] = t;
    report.radial_samples[i] = bakry_emery_ricci(M, N, t, Direction::Radial);
    report.fiber_samples[i] = bakry_emery_ricci(M, N, t, Direction::Fiber);
  }
  report.margin =
      std::min(report.radial_samples.minCoeff(), report.fiber_samples.minCoeff()) - bound;
  report.h_f_0 = weighted_mean_curvature(M, BoundarySide::Zero);
  if (M.second_boundary()) report.h_f_L = weighted_mean_curvature(M, BoundarySide::Far);
  return report;
}

double hypothesis_margin(const CurvatureReport& report, double N, double lambda) {
  const double mean_bound = is_infinite_dimension(N) ? 0.0 : (N - 1.0) * lambda;
  if (is_infinite_dimension(N) && lambda != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "N = inf comparisons use lambda = 0");
  }
  return std::min(report.margin, report.h_f_0 - mean_bound);
}

double collar_volume(const WarpedManifold& M, double r) {
  if (!(r >= 0.0) || r > M.L() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "collar radius must lie in [0, L]");
  }
  const DensityProfile a = radial_density(M);
  return M.fiber().total_volume * numerics::integrate(a, 0.0, std::min(r, M.L()));
}

double boundary_measure(const WarpedManifold& M) {
  return std::exp(-M.weight().value(0.0)) * std::pow(M.warp().value(0.0), M.n() - 1) *
         M.fiber().total_volume;
}

AnnulusQuantities annulus_quantities(const WarpedManifold& M, double a, double b) {
  if (!(a > 0.0) || !(b > a) || b > M.L() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "annulus needs 0 < a < b <= L");
  }
  const DensityProfile density = radial_density(M);
  const double vol = M.fiber().total_volume;
  return AnnulusQuantities{vol * numerics::integrate(density, a, b),
                           vol * (density(a) + density(b)), a, b};
}

DensityProfile radial_density(const WarpedManifold& M) {
  const Profile w = M.warp();
  const Profile f = M.weight();
  const int n = M.n();
  return DensityProfile::from_function(
      [w, f, n](double t) { return std::exp(-f.value(t)) * std::pow(w.value(t), n - 1); },
      "radial");
}

}  // namespace collar
