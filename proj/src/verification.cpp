#include "collar/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

#include "collar/error.hpp"
#include "collar/numerics.hpp"
#include "collar/sturm_liouville.hpp"

namespace collar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kDefaultRadii = 64;

std::string fmt(const char* name, double value) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%s=%.17g", name, value);
  return buf;
}

VerificationReport start(std::string name, const CheckOptions& options) {
  VerificationReport r;
  r.check_name = std::move(name);
  r.tolerance = options.tol.conclusion;
  r.gate_tolerance = options.tol.gate;
  r.hypothesis_margin = kInf;
  r.conclusion_margin = kNaN;
  return r;
}

void manifold_params(VerificationReport& r, const WarpedManifold& M, double N, double kappa,
                     double lambda) {
  r.params = {{"n", M.n()}, {"N", N}, {"kappa", kappa}, {"lambda", lambda}, {"L", M.L()}};
}

VerificationReport& not_applicable(VerificationReport& r, std::string why) {
  r.status = CheckStatus::NotApplicable;
  r.pass = false;
  r.conclusion_margin = kNaN;
  r.notes.push_back(std::move(why));
  return r;
}

VerificationReport& conclude(VerificationReport& r, double margin) {
  r.conclusion_margin = margin;
  r.pass = margin >= -r.tolerance;
  r.status = r.pass ? CheckStatus::Pass : CheckStatus::Fail;
  return r;
}

// Sets the hypothesis margin; false when the gate fails.
bool gate(VerificationReport& r, const WarpedManifold& M, double N, double kappa, double lambda,
          int grid) {
  r.hypothesis_margin = gate_margin(M, N, kappa, lambda, grid);
  r.samples += grid;
  if (r.hypothesis_margin >= -r.gate_tolerance) return true;
  not_applicable(r, "hypothesis gate failed: " + fmt("margin", r.hypothesis_margin));
  return false;
}

bool is_rigidity_of(const WarpedManifold& M, double N, double kappa, double lambda) {
  if (!M.origin()) return false;
  const ModelParams& o = M.origin()->params;
  return o.N == N && o.kappa == kappa && o.lambda == lambda && o.n == M.n();
}

std::vector<double> default_radii(double L) {
  std::vector<double> r(kDefaultRadii);
  for (int i = 0; i < kDefaultRadii; ++i) r[i] = L * (i + 1.0) / kDefaultRadii;
  return r;
}

// m_f(B_r) for each radius, integrating piecewise between sorted radii.
std::vector<double> collar_volumes(const WarpedManifold& M, const std::vector<double>& radii) {
  for (double r : radii) {
    if (!(r > 0.0) || r > M.L() * (1.0 + 1e-12)) {
      throw Error(ErrorCode::OutOfRange, "radii must lie in (0, L]");
    }
  }
  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });
  const DensityProfile density = radial_density(M);
  std::vector<double> out(radii.size());
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k : order) {
    const double r = std::min(radii[k], M.L());
    acc += numerics::integrate(density, prev, r);
    prev = r;
    out[k] = acc * M.fiber().total_volume;
  }
  return out;
}

double model_growth(double N, double kappa, double lambda, double r) {
  return is_infinite_dimension(N) ? r : collar_model_volume(N, kappa, lambda, r);
}

double scale(double x) { return std::max(1.0, std::abs(x)); }

// Portable [0, 1) variate from a 64-bit engine.
double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// e^x (x - 1) + 1 without cancellation near x = 0.
double growth_integral_core(double x) {
  if (x > 0.5) return std::exp(x) * (x - 1.0) + 1.0;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 20; ++k) {
    term *= x / k;
    if (k >= 2) sum += term * (k - 1);
  }
  return sum;
}

}  // namespace

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotApplicable: return "not-applicable";
  }
  return "unknown";
}

double gate_margin(const WarpedManifold& M, double N, double kappa, double lambda, int grid) {
  try {
    return hypothesis_margin(curvature_margin(M, N, kappa, grid), N, lambda);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonconstantWeight) return -kInf;
    throw;
  }
}

VerificationReport check_theta_comparison(const WarpedManifold& M, double N, double kappa,
                                          double lambda, const CheckOptions& options) {
  VerificationReport r = start("theta_comparison", options);
  manifold_params(r, M, N, kappa, lambda);
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  const int n = M.n();
  const double e0 = std::exp(-M.weight().value(0.0));
  double margin = kInf;
  for (int i = 0; i < options.grid; ++i) {
    const double t = M.L() * (i + 1.0) / (options.grid + 1.0);
    const Jet w = M.warp()(t);
    const Jet f = M.weight()(t);
    const double log_theta = -f.d1 + (n - 1.0) * w.d1 / w.v;
    if (is_infinite_dimension(N)) {
      margin = std::min(margin, -log_theta / scale(std::abs(f.d1) + (n - 1.0) * std::abs(w.d1 / w.v)));
      continue;
    }
    const ValueAndSlope s = s_kappa_lambda(kappa, lambda, t);
    const double theta = theta_f(M, t);
    if (!(s.value > 0.0)) {
      // Past the model's zero the bound forces theta_f = 0.
      margin = std::min(margin, -theta / e0);
      continue;
    }
    const double model_log = (N - 1.0) * s.slope / s.value;
    margin = std::min(margin, (model_log - log_theta) / scale(model_log));
    const double rhs = e0 * std::pow(s.value, N - 1.0);
    margin = std::min(margin, (rhs - theta) / rhs);
  }
  r.samples += options.grid;
  return conclude(r, margin);
}

VerificationReport check_heintze_karcher(const WarpedManifold& M, double N, double kappa,
                                         double lambda, const std::vector<double>& radii,
                                         const CheckOptions& options) {
  VerificationReport r = start("heintze_karcher", options);
  manifold_params(r, M, N, kappa, lambda);
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  const std::vector<double> rs = radii.empty() ? default_radii(M.L()) : radii;
  const std::vector<double> vols = collar_volumes(M, rs);
  const double boundary = boundary_measure(M);
  double margin = kInf;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double rhs = model_growth(N, kappa, lambda, rs[i]) * boundary;
    margin = std::min(margin, (rhs - vols[i]) / rhs);
  }
  r.samples += static_cast<int>(rs.size());
  return conclude(r, margin);
}

VerificationReport check_bishop_gromov(const WarpedManifold& M, double N, double kappa,
                                       double lambda,
                                       const std::vector<std::array<double, 2>>& pairs,
                                       const CheckOptions& options) {
  VerificationReport r = start("bishop_gromov", options);
  manifold_params(r, M, N, kappa, lambda);
  for (const auto& [a, b] : pairs) {
    if (!(a > 0.0) || !(b > a) || b > M.L() * (1.0 + 1e-12)) {
      throw Error(ErrorCode::OutOfRange, "Bishop-Gromov pairs need 0 < r < R <= L");
    }
  }
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  // Monotonicity of m_f(B_r) / s_N(r) on the default grid; with no explicit
  // pairs this is the same as checking every grid pair.
  const std::vector<double> grid = default_radii(M.L());
  const std::vector<double> vols = collar_volumes(M, grid);
  std::vector<double> q(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    q[i] = vols[i] / model_growth(N, kappa, lambda, grid[i]);
  }
  double margin = kInf;
  for (std::size_t i = 0; i + 1 < q.size(); ++i) margin = std::min(margin, (q[i] - q[i + 1]) / q[i]);
  r.samples += static_cast<int>(grid.size());

  if (pairs.empty()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      for (std::size_t j = i + 1; j < grid.size(); ++j) margin = std::min(margin, 1.0 - q[j] / q[i]);
    }
    r.samples += static_cast<int>(grid.size() * (grid.size() - 1) / 2);
  } else {
    std::vector<double> flat;
    for (const auto& [a, b] : pairs) {
      flat.push_back(a);
      flat.push_back(b);
    }
    const std::vector<double> v = collar_volumes(M, flat);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const double lhs = v[2 * k + 1] / v[2 * k];
      const double rhs = model_growth(N, kappa, lambda, pairs[k][1]) /
                         model_growth(N, kappa, lambda, pairs[k][0]);
      margin = std::min(margin, (rhs - lhs) / rhs);
    }
    r.samples += static_cast<int>(pairs.size());
  }
  return conclude(r, margin);
}

VerificationReport check_inscribed_radius(const WarpedManifold& M, double kappa, double lambda,
                                          double N, const CheckOptions& options) {
  VerificationReport r = start("inscribed_radius", options);
  manifold_params(r, M, N, kappa, lambda);
  if (!ball_condition(kappa, lambda)) {
    return not_applicable(r, "ball condition fails for (kappa, lambda)");
  }
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  const double C = *ball_radius(kappa, lambda);
  r.notes.push_back(fmt("C_kappa_lambda", C));
  double margin = (C - M.L()) / C;
  if (is_rigidity_of(M, N, kappa, lambda)) {
    // The model's Jacobian vanishes at the conjugate radius.
    const double theta_at_C = std::pow(std::abs(s_kappa_lambda(kappa, lambda, C).value), M.n() - 1);
    r.notes.push_back(fmt("model_theta_at_C", theta_at_C));
    margin = std::min(margin, -theta_at_C);
  }
  r.samples += 1;
  return conclude(r, margin);
}

VerificationReport check_eigenvalue_bound(const WarpedManifold& M, double p, double N,
                                          double kappa, double lambda,
                                          const CheckOptions& options) {
  VerificationReport r = start("eigenvalue_bound", options);
  manifold_params(r, M, N, kappa, lambda);
  r.params.insert(r.params.begin(), {"p", p});
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be > 1");
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;
  if (M.L() > truncation_radius(kappa, lambda) * (1.0 + 1e-12)) {
    return not_applicable(r, "L exceeds C_bar, the model eigenvalue is undefined");
  }

  const EigenResult rad = principal_eigenvalue(p, radial_density(M), M.L());
  const EigenResult model = is_infinite_dimension(N) ? free_eigenvalue(p, M.L())
                                                     : model_eigenvalue(p, N, kappa, lambda, M.L());
  r.notes.push_back(fmt("mu_rad", rad.mu));
  r.notes.push_back(fmt("mu_model", model.mu));
  r.samples += rad.iterations + model.iterations;
  double margin = (rad.mu - model.mu) / model.mu;
  if (is_rigidity_of(M, N, kappa, lambda)) {
    r.notes.push_back("equality case");
    margin = -std::abs(margin);
  }
  return conclude(r, margin);
}

VerificationReport check_kasue_eigen_bounds(double p, double N, double kappa, double lambda,
                                            double D, const CheckOptions& options) {
  VerificationReport r = start("kasue_eigen_bounds", options);
  r.params = {{"p", p}, {"N", N}, {"kappa", kappa}, {"lambda", lambda}, {"D", D}};
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be > 1");
  if (!(D > 0.0) || !std::isfinite(D)) throw Error(ErrorCode::InvalidArgument, "D must be positive");
  if (is_infinite_dimension(N)) {
    if (kappa != 0.0 || lambda != 0.0) {
      return not_applicable(r, "the N = inf bound is stated for kappa = lambda = 0");
    }
    const double mu = free_eigenvalue(p, D).mu;
    const double bound = std::pow(p * D, -p);
    r.notes.push_back(fmt("mu", mu));
    r.notes.push_back(fmt("bound_pD", bound));
    r.samples = 1;
    return conclude(r, (mu - bound) / mu);
  }
  if (!(N >= 2.0)) throw Error(ErrorCode::InvalidArgument, "N must be >= 2");
  const double cbar = truncation_radius(kappa, lambda);
  r.hypothesis_margin = cbar - D;
  if (D > cbar * (1.0 + 1e-12)) return not_applicable(r, "D exceeds C_bar");
  r.hypothesis_margin = std::max(0.0, r.hypothesis_margin);

  const double mu = model_eigenvalue(p, N, kappa, lambda, D).mu;
  const double C = kasue_constant(N, kappa, lambda, D);
  const double bound = std::pow(p * C, -p);
  r.notes.push_back(fmt("mu", mu));
  r.notes.push_back(fmt("kasue_constant", C));
  r.notes.push_back(fmt("bound_pC", bound));
  double margin = (mu - bound) / mu;
  r.samples = 2;
  if (p == 2.0) {
    const double computable = kasue_computable_bound(N, kappa, lambda, D);
    r.notes.push_back(fmt("bound_computable", computable));
    r.notes.push_back(computable < mu ? "computable bound strict" : "computable bound not strict");
    margin = std::min(margin, (mu - computable) / mu);
    r.samples += 1;
  }
  return conclude(r, margin);
}

VerificationReport check_spectrum_limit(double p, double N, double lambda,
                                        const std::vector<double>& D_grid,
                                        const CheckOptions& options) {
  VerificationReport r = start("spectrum_limit", options);
  std::vector<double> Ds = D_grid;
  if (Ds.empty()) {
    for (int i = 0; i < 32; ++i) Ds.push_back(0.5 * std::pow(80.0, i / 31.0));
  }
  r.params = {{"p", p}, {"N", N}, {"lambda", lambda}, {"D", Ds.back()}};
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must be > 1");
  if (!(lambda > 0.0)) return not_applicable(r, "needs lambda > 0");
  if (!(N >= 2.0) || is_infinite_dimension(N)) return not_applicable(r, "needs finite N >= 2");
  if (!std::is_sorted(Ds.begin(), Ds.end()) || !(Ds.front() > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "D grid must be positive and increasing");
  }
  const double kappa = -lambda * lambda;

  std::vector<double> C(Ds.size());
  for (std::size_t i = 0; i < Ds.size(); ++i) C[i] = kasue_constant(N, kappa, lambda, Ds[i]);
  // C grows with D, so (p C)^{-p} decreases toward the limit.
  double margin = kInf;
  for (std::size_t i = 0; i + 1 < C.size(); ++i) margin = std::min(margin, C[i + 1] - C[i]);
  if (C.size() < 2) margin = 0.0;

  // Independent generic evaluation at a few grid points.
  double worst_scan = 0.0;
  for (std::size_t i : {std::size_t{0}, Ds.size() / 3, 2 * Ds.size() / 3, Ds.size() - 1}) {
    const double scan = kasue_constant_scan(N, kappa, lambda, Ds[i]);
    worst_scan = std::max(worst_scan, std::abs(scan - C[i]) / C[i]);
  }
  r.notes.push_back(fmt("scan_vs_closed_form", worst_scan));
  margin = std::min(margin, -std::max(0.0, worst_scan - 1e-6));

  const double limit = std::pow((N - 1.0) * lambda / p, p);
  const double last = std::pow(p * C.back(), -p);
  r.notes.push_back(fmt("limit", limit));
  r.notes.push_back(fmt("bound_at_D_max", last));
  margin = std::min(margin, -std::abs(last - limit) / limit);
  r.samples = static_cast<int>(Ds.size());
  return conclude(r, margin);
}

VerificationReport check_domain_volume_estimate(const WarpedManifold& M, double N, double kappa,
                                                double lambda, double a, double b,
                                                const CheckOptions& options) {
  VerificationReport r = start("domain_volume_estimate", options);
  manifold_params(r, M, N, kappa, lambda);
  r.params.push_back({"a", a});
  r.params.push_back({"b", b});
  if (!(a > 0.0) || !(b > a) || b > M.L() * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "domain needs 0 < a < b <= L");
  }
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  const AnnulusQuantities q = annulus_quantities(M, a, b);
  double sup = b - a;
  if (!is_infinite_dimension(N)) {
    if (b > truncation_radius(kappa, lambda)) return not_applicable(r, "b exceeds C_bar");
    auto power = [=](double t) { return std::pow(s_bar(kappa, lambda, t), N - 1.0); };
    auto ratio = [&](double t) { return numerics::integrate(power, t, b) / power(t); };
    sup = numerics::scan_and_refine_max(ratio, a, b, 1024, false).value;
  }
  const double rhs = q.boundary_area * sup;
  r.notes.push_back(fmt("volume", q.volume));
  r.notes.push_back(fmt("bound", rhs));
  r.samples += 1024;
  return conclude(r, (rhs - q.volume) / rhs);
}

VerificationReport check_volume_growth_equality(const WarpedManifold& M, double N,
                                                double kappa, double lambda,
                                                const std::vector<double>& radii,
                                                const CheckOptions& options) {
  VerificationReport r = start("volume_growth_equality", options);
  manifold_params(r, M, N, kappa, lambda);
  if (!is_rigidity_of(M, N, kappa, lambda)) {
    return not_applicable(r, "equality is asserted only for the rigidity model");
  }
  if (!gate(r, M, N, kappa, lambda, options.grid)) return r;

  const std::vector<double> rs = radii.empty() ? default_radii(M.L()) : radii;
  const std::vector<double> vols = collar_volumes(M, rs);
  const double boundary = boundary_measure(M);
  double worst = 0.0;
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const double ratio = vols[i] / model_growth(N, kappa, lambda, rs[i]);
    worst = std::max(worst, std::abs(ratio - boundary) / boundary);
  }
  r.samples += static_cast<int>(rs.size());
  return conclude(r, -worst);
}

WarpedManifold make_perturbed(const PerturbationSpec& spec) {
  const ModelParams& m = spec.params;
  m.validate();
  if (!(spec.growth_rate > 0.0) || !(spec.amplitude > 0.0) || !(spec.amplitude < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "perturbation needs A > 0 and amplitude in (0, 1)");
  }
  if (!(spec.L > 0.0) || spec.L >= truncation_radius(m.kappa, m.lambda)) {
    throw Error(ErrorCode::OutOfRange, "perturbation needs 0 < L < C_bar");
  }
  const double A = spec.growth_rate;
  auto H = [A](double t) { return growth_integral_core(2.0 * A * t) / (4.0 * A * A); };
  const double eps = spec.amplitude / H(spec.L);
  const Profile s = Profile::jacobi(m.kappa, m.lambda);
  Profile w = Profile::closed_form(
      [=](const Jet& t) {
        const double e = std::exp(2.0 * A * t.v);
        const Jet g = compose(t, 1.0 - eps * H(t.v), -eps * t.v * e, -eps * e * (1.0 + 2.0 * A * t.v));
        return s(t.v) * g;
      },
      "perturbed");
  const double excess = is_infinite_dimension(m.N) ? 0.0 : m.N - m.n;
  FiberSpec fiber{m.n - 1, rigidity_fiber_constant(m.n, m.N, m.kappa, m.lambda) + spec.fiber_slack,
                  unit_sphere_volume(m.n - 1)};
  return build(m.n, fiber, spec.L, std::move(w),
               Profile::log_jacobi(spec.f0, excess, m.kappa, m.lambda));
}

PerturbationSpec draw_perturbation(const ModelParams& params, double L, std::uint64_t seed,
                                   double max_amplitude) {
  if (!(max_amplitude > 0.0) || !(max_amplitude < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "amplitude must lie in (0, 1)");
  }
  std::mt19937_64 rng(seed);
  double slope = 0.0;
  for (int i = 0; i <= 512; ++i) {
    const ValueAndSlope s = s_kappa_lambda(params.kappa, params.lambda, L * i / 512.0);
    slope = std::max(slope, std::abs(s.slope / s.value));
  }
  PerturbationSpec spec;
  spec.params = params;
  spec.L = L;
  spec.growth_rate = std::max(slope, 0.25) * (1.0 + uniform(rng));
  spec.amplitude = max_amplitude * (0.2 + 0.8 * uniform(rng));
  spec.fiber_slack = 1.0 + 2.0 * uniform(rng);
  return spec;
}

std::vector<PerturbedSample> admissible_perturbations(std::uint64_t seed, int count,
                                                      const CheckOptions& options,
                                                      double max_amplitude) {
  static const ModelParams families[] = {
      {3, 3.0, -1.0, 1.0}, {3, 5.0, -1.0, 1.0}, {3, 4.0, 0.0, 1.0},
      {4, 4.0, 1.0, 0.0},  {3, kInfiniteDimension, 0.0, 0.0}, {4, 6.0, -0.25, 0.5},
  };
  std::mt19937_64 rng(seed);
  std::vector<PerturbedSample> out;
  for (int attempt = 0; attempt < 20 * count && static_cast<int>(out.size()) < count; ++attempt) {
    const ModelParams& params = families[rng() % std::size(families)];
    const double cbar = truncation_radius(params.kappa, params.lambda);
    const double u = uniform(rng);
    const double L = std::isinf(cbar) ? 0.5 + 2.0 * u : cbar * (0.3 + 0.55 * u);
    const double f0 = uniform(rng) - 0.5;
    const std::uint64_t sub_seed = rng();
    PerturbationSpec spec = draw_perturbation(params, L, sub_seed, max_amplitude);
    spec.f0 = f0;
    WarpedManifold M = make_perturbed(spec);
    const double margin = gate_margin(M, params.N, params.kappa, params.lambda, options.grid);
    if (margin >= -options.tol.gate) out.push_back({sub_seed, spec, std::move(M), margin});
  }
  if (static_cast<int>(out.size()) < count) {
    throw Error(ErrorCode::NoConvergence, "too few perturbations passed the hypothesis gate");
  }
  return out;
}

}  // namespace collar
