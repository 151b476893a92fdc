#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "collar/model_space.hpp"
#include "collar/profile.hpp"
#include "collar/sturm_liouville.hpp"

namespace collar {

/// Abstract Einstein fiber: Ric_h = (dim - 1) * einstein_constant * h.
struct FiberSpec {
  int dim = 1;
  double einstein_constant = 1.0;
  double total_volume = 1.0;

  bool operator==(const FiberSpec&) const = default;
};

/// Volume of the unit sphere S^dim.
double unit_sphere_volume(int dim);

/// Parameters a manifold was generated from, when it is a comparison model.
struct ModelOrigin {
  ModelParams params;
  double f0 = 0.0;
};

/// [0, L] x_w F with radial weight f; t is the distance to the boundary t = 0
/// and +d/dt is the inner normal there.
class WarpedManifold {
 public:
  int n() const { return n_; }
  const FiberSpec& fiber() const { return fiber_; }
  double L() const { return L_; }
  const Profile& warp() const { return w_; }
  const Profile& weight() const { return f_; }
  bool second_boundary() const { return second_boundary_; }
  const std::optional<ModelOrigin>& origin() const { return origin_; }

 private:
  friend WarpedManifold build(int n, const FiberSpec& fiber, double L, Profile w, Profile f,
                              bool second_boundary);
  friend WarpedManifold make_rigidity_model(int n, double N, double kappa, double lambda,
                                            double L, double f0);
  friend WarpedManifold make_product(int n, double L, double f0);

  WarpedManifold() = default;

  int n_ = 2;
  FiberSpec fiber_;
  double L_ = 1.0;
  Profile w_;
  Profile f_;
  bool second_boundary_ = false;
  std::optional<ModelOrigin> origin_;
};

/// Validates and assembles a manifold. Errors: DimensionMismatch,
/// NonpositiveWarping (w <= 0 somewhere on [0, L)), ProfileNotDifferentiable,
/// OutOfRange (sampled table does not cover [0, L]).
WarpedManifold build(int n, const FiberSpec& fiber, double L, Profile w, Profile f,
                     bool second_boundary = false);

/// w = s_{kappa,lambda}, f = f0 - (N - n) log s_{kappa,lambda}. For N = inf
/// this requires kappa = lambda = 0 (the product). Rejects L >= C_bar.
WarpedManifold make_rigidity_model(int n, double N, double kappa, double lambda, double L,
                                   double f0 = 0.0);

/// Fiber Einstein constant used by make_rigidity_model: (kappa + lambda^2)
/// (N - 2) / (n - 2) for n >= 3 and finite N, kappa + lambda^2 otherwise.
double rigidity_fiber_constant(int n, double N, double kappa, double lambda);

/// w == 1, f == f0, unit-sphere fiber.
WarpedManifold make_product(int n, double L, double f0 = 0.0);

/// e^{-f(t)} (w(t) / w(0))^{n-1}.
double theta_f(const WarpedManifold& M, double t);

enum class Direction { Radial, Fiber };
enum class BoundarySide { Zero, Far };

/// Diagonal blocks of Ric_g, Hess f and df along the radial unit vector and
/// any unit fiber vector at distance t.
struct RicciComponents {
  double ric_radial;
  double ric_fiber;
  double hess_radial;
  double hess_fiber;
  double df_radial;
};

RicciComponents ricci_components(const WarpedManifold& M, double t);

/// Ric^N_f in the given direction. N = n requires a constant weight
/// (NonconstantWeight otherwise); N = inf drops the gradient term.
double bakry_emery_ricci(const WarpedManifold& M, double N, double t, Direction direction);

/// H_f at t = 0 (inner normal +d/dt) or at t = L (inner normal -d/dt; needs
/// second_boundary).
double weighted_mean_curvature(const WarpedManifold& M, BoundarySide side);

struct CurvatureReport {
  Eigen::VectorXd t;
  Eigen::VectorXd radial_samples;
  Eigen::VectorXd fiber_samples;
  /// min over samples and both directions of Ric^N_f - (N-1) kappa.
  double margin = 0.0;
  double h_f_0 = 0.0;
  std::optional<double> h_f_L;
};

/// Lower Ricci bound (N-1) kappa, or 0 for N = inf (which requires kappa = 0).
double ricci_bound(double N, double kappa);

/// Samples Ric^N_f on `grid` interior points of (0, L).
CurvatureReport curvature_margin(const WarpedManifold& M, double N, double kappa, int grid);

/// Combined gate slack: min(report.margin, H_f(0) - (N-1) lambda).
double hypothesis_margin(const CurvatureReport& report, double N, double lambda);

/// m_f(B_r(boundary)) = vol(F) int_0^r e^{-f} w^{n-1} dt, r in [0, L].
double collar_volume(const WarpedManifold& M, double r);

/// m_{f,boundary}(boundary) = e^{-f(0)} w(0)^{n-1} vol(F).
double boundary_measure(const WarpedManifold& M);

struct AnnulusQuantities {
  double volume;
  double boundary_area;
  double delta1;
  double delta2;
};

/// Omega = (a, b) x F with 0 < a < b <= L.
AnnulusQuantities annulus_quantities(const WarpedManifold& M, double a, double b);

/// a(t) = e^{-f(t)} w(t)^{n-1} on [0, L].
DensityProfile radial_density(const WarpedManifold& M);

}  // namespace collar
