#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace collar {

/// Positive weight a(t) of the radial eigenvalue problem
///   (a |phi'|^{p-2} phi')' + mu a |phi|^{p-2} phi = 0,  phi(0) = 0, phi'(D) = 0.
class DensityProfile {
 public:
  /// a == c.
  static DensityProfile constant(double c = 1.0);
  /// a = s_bar_{kappa,lambda}^{N-1}.
  static DensityProfile model(double N, double kappa, double lambda);
  /// Uniform samples on [t0, t1], monotone-cubic (PCHIP) interpolation.
  static DensityProfile sampled(double t0, double t1, std::vector<double> values);
  static DensityProfile from_function(std::function<double(double)> fn, std::string label);

  double operator()(double t) const { return fn_(t); }
  DensityProfile scaled(double c) const;
  const std::string& label() const { return label_; }

 private:
  DensityProfile(std::function<double(double)> fn, std::string label)
      : fn_(std::move(fn)), label_(std::move(label)) {}

  std::function<double(double)> fn_;
  std::string label_;
};

struct ShotResult {
  double phi_end;
  double dphi_end;
  std::optional<double> first_critical;
  double t_end;
};

/// Integrates u = phi, v = a |phi'|^{p-2} phi' from (0, a(0)) so phi'(0) = 1.
/// Throws IntegrationFailure when the step size underflows.
ShotResult shoot(double p, const DensityProfile& density, double mu, double D);

struct EigenResult {
  double mu = 0.0;
  /// phi on LinSpaced(phi.size(), 0, t_end), normalized to max phi = 1.
  Eigen::VectorXd phi;
  double t_end = 0.0;
  double mu_lo = 0.0;
  double mu_hi = 0.0;
  int iterations = 0;
  double endpoint_residual = 0.0;
  bool degenerate_endpoint = false;
  std::vector<std::string> diagnostics;

  Eigen::VectorXd grid() const {
    return Eigen::VectorXd::LinSpaced(phi.size(), 0.0, t_end);
  }
};

struct EigenOptions {
  double relative_width = 1e-12;
  int samples = 1025;
};

/// Smallest mu with a solution satisfying phi'(D) = 0, by bisection on the
/// event "phi' vanishes in (0, D]". Throws NoConvergence if no bracket is
/// found below 1e6 / D^p.
EigenResult principal_eigenvalue(double p, const DensityProfile& density, double D,
                                 const EigenOptions& options = {});

/// mu_{p,N,kappa,lambda,D}; D in (0, C_bar]. D = C_bar stops 1e-9 short.
EigenResult model_eigenvalue(double p, double N, double kappa, double lambda, double D,
                             const EigenOptions& options = {});

/// mu_{p,inf,D}.
EigenResult free_eigenvalue(double p, double D, const EigenOptions& options = {});

/// Independent p = 2 oracle: second-order finite differences with a
/// ghost-point Neumann closure, smallest eigenvalue of the symmetric
/// tridiagonal pencil by Sturm-sequence bisection.
double fd_oracle_p2(const DensityProfile& density, double D, int mesh);

/// int a |phi'|^p / int a |phi|^p for phi sampled uniformly on [0, D].
double rayleigh_quotient(double p, const DensityProfile& density, const Eigen::VectorXd& phi,
                         double D);

}  // namespace collar
