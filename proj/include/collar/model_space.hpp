#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace collar {

/// Sentinel for the infinite effective dimension N = inf.
inline constexpr double kInfiniteDimension = std::numeric_limits<double>::infinity();

inline bool is_infinite_dimension(double N) { return std::isinf(N) && N > 0; }

/// Comparison parameters: dimension n, effective dimension N in [n, inf],
/// lower Ricci bound (N-1)kappa and lower mean-curvature bound (N-1)lambda.
struct ModelParams {
  int n = 2;
  double N = 2.0;
  double kappa = 0.0;
  double lambda = 0.0;

  /// Throws InvalidArgument unless n >= 2 and (N >= n or N = inf).
  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

enum class CurvatureClass { Ball, Model, Neither };

const char* to_string(CurvatureClass c);

struct ValueAndSlope {
  double value;
  double slope;
};

// Generalized sine/cosine of phi'' + kappa phi = 0 with (s, s') = (0, 1) and
// (c, c') = (1, 0). Series near kappa t^2 = 0.
ValueAndSlope s_kappa(double kappa, double t);
ValueAndSlope c_kappa(double kappa, double t);

/// s_{kappa,lambda}(t) = c_kappa(t) - lambda s_kappa(t) and its derivative.
ValueAndSlope s_kappa_lambda(double kappa, double lambda, double t);

bool ball_condition(double kappa, double lambda);
bool model_condition(double kappa, double lambda);

/// Model when the model condition holds (it takes priority where both hold,
/// kappa > 0 and lambda < 0), else Ball, else Neither.
CurvatureClass classify(double kappa, double lambda);

/// First positive zero of s_{kappa,lambda}; empty unless ball_condition().
std::optional<double> ball_radius(double kappa, double lambda);

/// ball_radius or +inf (the truncation radius of the collar model).
double truncation_radius(double kappa, double lambda);

struct ModelCritical {
  std::optional<double> radius;
  /// kappa = lambda = 0: s' vanishes identically, the critical radius is
  /// taken from the manifold instead.
  bool degenerate_flat = false;
};

/// First positive zero of s'_{kappa,lambda} when classify() == Model.
ModelCritical model_critical(double kappa, double lambda);

/// s_{kappa,lambda} truncated to zero at and beyond the ball radius.
double s_bar(double kappa, double lambda, double t);

/// s_{N,kappa,lambda}(r): integral of s_bar^{N-1} over [0, r].
double collar_model_volume(double N, double kappa, double lambda, double r);

/// Closed form of C(N, -lambda^2, lambda, D) (D may be +inf).
double kasue_constant_closed_form(double N, double lambda, double D);

/// Generic scan-and-refine evaluation of sup_t int_t^D s^{N-1} / s^{N-1}(t).
double kasue_constant_scan(double N, double kappa, double lambda, double D);

/// C(N, kappa, lambda, D). Uses the closed form when kappa = -lambda^2,
/// lambda > 0, the scan otherwise.
double kasue_constant(double N, double kappa, double lambda, double D);

/// Lower bound for mu_{2,N,kappa,lambda,D}:
/// (4 max_t int_t^D s^{N-1} int_0^t s^{1-N})^{-1}.
double kasue_computable_bound(double N, double kappa, double lambda, double D);

}  // namespace collar
