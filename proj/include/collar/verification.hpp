#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "collar/model_space.hpp"
#include "collar/warped_product.hpp"

namespace collar {

enum class CheckStatus { Pass, Fail, NotApplicable };

const char* to_string(CheckStatus status);

struct Tolerances {
  /// Absolute slack allowed in the curvature and mean-curvature hypotheses.
  double gate = 1e-9;
  /// Slack allowed in the (relative) conclusion margin.
  double conclusion = 1e-8;
};

struct CheckOptions {
  int grid = 1024;
  Tolerances tol;
};

struct VerificationReport {
  std::string check_name;
  std::string manifold;
  std::vector<std::pair<std::string, double>> params;
  /// +inf when the check has no hypothesis gate.
  double hypothesis_margin = 0.0;
  /// NaN when the conclusion was not evaluated (not-applicable).
  double conclusion_margin = 0.0;
  CheckStatus status = CheckStatus::NotApplicable;
  /// status == Pass. A not-applicable check is never a pass.
  bool pass = false;
  double tolerance = 0.0;
  double gate_tolerance = 0.0;
  int samples = 0;
  std::vector<std::string> notes;
  std::optional<std::uint64_t> seed;
};

VerificationReport check_theta_comparison(const WarpedManifold& M, double N, double kappa,
                                          double lambda, const CheckOptions& options = {});

/// Empty `radii` means 64 equally spaced radii in (0, L].
VerificationReport check_heintze_karcher(const WarpedManifold& M, double N, double kappa,
                                         double lambda, const std::vector<double>& radii = {},
                                         const CheckOptions& options = {});

/// Empty `pairs` means every pair of the default radius grid.
VerificationReport check_bishop_gromov(const WarpedManifold& M, double N, double kappa,
                                       double lambda,
                                       const std::vector<std::array<double, 2>>& pairs = {},
                                       const CheckOptions& options = {});

VerificationReport check_inscribed_radius(const WarpedManifold& M, double kappa, double lambda,
                                          double N, const CheckOptions& options = {});

VerificationReport check_eigenvalue_bound(const WarpedManifold& M, double p, double N,
                                          double kappa, double lambda,
                                          const CheckOptions& options = {});

VerificationReport check_kasue_eigen_bounds(double p, double N, double kappa, double lambda,
                                            double D, const CheckOptions& options = {});

/// kappa = -lambda^2. Empty `D_grid` means 32 geometrically spaced D up to 40.
VerificationReport check_spectrum_limit(double p, double N, double lambda,
                                        const std::vector<double>& D_grid = {},
                                        const CheckOptions& options = {});

VerificationReport check_domain_volume_estimate(const WarpedManifold& M, double N, double kappa,
                                                double lambda, double a, double b,
                                                const CheckOptions& options = {});

VerificationReport check_volume_growth_equality(const WarpedManifold& M, double N,
                                                double kappa, double lambda,
                                                const std::vector<double>& radii = {},
                                                const CheckOptions& options = {});

/// Gate value used by every manifold check: min of the sampled Ric^N_f
/// slack and H_f(0) - (N-1) lambda. -inf when Ric^N_f is -inf (N = n with a
/// nonconstant weight).
double gate_margin(const WarpedManifold& M, double N, double kappa, double lambda, int grid);

// Perturbations of the rigidity model: w = s_{kappa,lambda} * g with
// g(t) = 1 - eps * int_0^t u e^{2 A u} du, the model weight, and fiber
// constant raised by `fiber_slack`. g(0) = 1 and g'(0) = 0 keep H_f(0);
// A >= max |s'/s| keeps the radial curvature at or above the model.
struct PerturbationSpec {
  ModelParams params;
  double L = 1.0;
  double f0 = 0.0;
  double growth_rate = 1.0;
  /// 1 - g(L), in (0, 1).
  double amplitude = 0.1;
  double fiber_slack = 0.0;

  bool operator==(const PerturbationSpec&) const = default;
};

WarpedManifold make_perturbed(const PerturbationSpec& spec);

/// Random growth rate, amplitude in [0.2, 1] * max_amplitude and fiber slack
/// in [1, 3], from a seeded mt19937_64.
PerturbationSpec draw_perturbation(const ModelParams& params, double L, std::uint64_t seed,
                                   double max_amplitude = 0.3);

struct PerturbedSample {
  std::uint64_t seed;
  PerturbationSpec spec;
  WarpedManifold manifold;
  double hypothesis_margin;
};

/// Draws model families, lengths and perturbations until `count` manifolds
/// pass the hypothesis gate. Throws NoConvergence after 20 * count attempts.
std::vector<PerturbedSample> admissible_perturbations(std::uint64_t seed, int count,
                                                      const CheckOptions& options = {},
                                                      double max_amplitude = 0.3);

}  // namespace collar
