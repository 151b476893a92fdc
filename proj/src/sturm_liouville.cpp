#include "collar/sturm_liouville.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/fpclassify.hpp>  // must precede pchip.hpp on Boost 1.74
#include <boost/math/interpolators/pchip.hpp>
#include <boost/numeric/odeint.hpp>

#include "collar/error.hpp"
#include "collar/model_space.hpp"
#include "collar/numerics.hpp"

namespace collar {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::array<double, 2>;

constexpr double kAbsTol = 1e-12;
constexpr double kRelTol = 1e-10;
constexpr double kDegenerateGap = 1e-9;
constexpr long kMaxSteps = 5'000'000;

double signed_power(double x, double e) {
  return std::copysign(std::pow(std::abs(x), e), x);
}

void require_exponent(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw Error(ErrorCode::InvalidArgument, "p must lie in (1, inf), got " + std::to_string(p));
  }
}

void require_length(double D) {
  if (!(D > 0.0) || !std::isfinite(D)) {
    throw Error(ErrorCode::InvalidArgument, "D must be positive and finite");
  }
}

// Right-hand side of the first-order system for u = phi, v = a |phi'|^{p-2} phi'
// with the density divided by a(0).
struct FluxSystem {
  const DensityProfile* density;
  double inv_a0;
  double p;
  double mu;

  double slope(double v, double a) const {
    const double q = v / a;
    return p == 2.0 ? q : signed_power(q, 1.0 / (p - 1.0));
  }

  void operator()(const State& x, State& dxdt, double t) const {
    const double a = (*density)(t)*inv_a0;
    dxdt[0] = slope(x[1], a);
    dxdt[1] = -mu * a * (p == 2.0 ? x[0] : signed_power(x[0], p - 1.0));
  }
};

struct Trajectory {
  ShotResult shot;
  Eigen::VectorXd u_samples;
  Eigen::VectorXd v_samples;
};

// Locates the sign change of v inside [t0, t0 + dt] by bisecting the length
// of a single RK4 step from the saved state.
double locate_critical(const FluxSystem& sys, const State& x0, double t0, double dt) {
  odeint::runge_kutta4<State> rk;
  double lo = 0.0, hi = dt;
  for (int i = 0; i < 60 && hi - lo > 1e-15 * (t0 + dt); ++i) {
    const double mid = 0.5 * (lo + hi);
    State out;
    rk.do_step(sys, x0, t0, out, mid);
    if (out[1] > 0.0) lo = mid; else hi = mid;
  }
  return t0 + 0.5 * (lo + hi);
}

Trajectory integrate(double p, const DensityProfile& density, double a0, double mu,
                     double t_end, bool stop_at_critical, int samples) {
  const FluxSystem sys{&density, 1.0 / a0, p, mu};
  auto stepper = odeint::make_controlled(kAbsTol, kRelTol, odeint::runge_kutta_dopri5<State>());

  Trajectory out;
  if (samples > 0) {
    out.u_samples = Eigen::VectorXd::Zero(samples);
    out.v_samples = Eigen::VectorXd::Zero(samples);
    out.v_samples[0] = 1.0;
  }
  const Eigen::VectorXd sample_t =
      samples > 1 ? Eigen::VectorXd::LinSpaced(samples, 0.0, t_end) : Eigen::VectorXd();

  State x{0.0, 1.0};
  double t = 0.0;
  double dt = 1e-3 * t_end;
  const double dt_min = 1e-15 * std::max(1.0, t_end);
  int next_sample = 1;
  std::optional<double> critical;
  long steps = 0;

  while (t < t_end) {
    double target = t_end;
    if (samples > 1 && next_sample < samples) target = sample_t[next_sample];
    const bool capped = dt >= target - t;
    const double natural_dt = dt;
    if (capped) dt = target - t;

    const State x0 = x;
    const double t0 = t;
    const auto result = stepper.try_step(sys, x, t, dt);
    if (result == odeint::fail) {
      if (dt < dt_min || !std::isfinite(dt)) {
        throw Error(ErrorCode::IntegrationFailure,
                    "step size underflow at t = " + std::to_string(t) + " (mu = " +
                        std::to_string(mu) + ")");
      }
      continue;
    }
    if (++steps > kMaxSteps) {
      throw Error(ErrorCode::IntegrationFailure, "step budget exhausted while shooting");
    }
    if (!std::isfinite(x[0]) || !std::isfinite(x[1])) {
      throw Error(ErrorCode::IntegrationFailure, "non-finite state while shooting");
    }
    if (capped) {
      if (t >= target || target - t <= 1e-14 * std::max(1.0, target)) t = target;
      dt = std::max(dt, natural_dt);
    }
    if (samples > 1 && next_sample < samples && t == sample_t[next_sample]) {
      out.u_samples[next_sample] = x[0];
      out.v_samples[next_sample] = x[1];
      ++next_sample;
    }
    if (!critical && x[1] <= 0.0) {
      critical = locate_critical(sys, x0, t0, t - t0);
      if (stop_at_critical) break;
    }
  }

  const double a_end = density(t) / a0;
  out.shot = ShotResult{x[0], sys.slope(x[1], a_end), critical, t};
  return out;
}

struct Prepared {
  double a0;
  double t_end;
  bool degenerate;
};

Prepared prepare(double p, const DensityProfile& density, double D) {
  require_exponent(p);
  require_length(D);
  const double a0 = density(0.0);
  if (!(a0 > 0.0) || !std::isfinite(a0)) {
    throw Error(ErrorCode::InvalidArgument, "density must be positive at t = 0");
  }
  constexpr int kChecks = 256;
  for (int i = 1; i < kChecks; ++i) {
    const double a = density(D * i / kChecks);
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw Error(ErrorCode::InvalidArgument,
                  "density must be positive on [0, D); fails at t = " +
                      std::to_string(D * i / kChecks));
    }
  }
  const double a_end = density(D);
  const bool degenerate = !(a_end >= 1e-10 * a0) || !std::isfinite(a_end);
  return {a0, degenerate ? D - kDegenerateGap : D, degenerate};
}

}  // namespace

DensityProfile DensityProfile::constant(double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "constant density must be positive");
  return DensityProfile([c](double) { return c; }, "constant");
}

DensityProfile DensityProfile::model(double N, double kappa, double lambda) {
  if (!(N >= 2.0) || !std::isfinite(N)) {
    throw Error(ErrorCode::InvalidArgument, "model density needs finite N >= 2");
  }
  const double cbar = truncation_radius(kappa, lambda);
  return DensityProfile(
      [=](double t) {
        if (t >= cbar) return 0.0;
        const double s = s_kappa_lambda(kappa, lambda, t).value;
        return std::pow(std::max(s, 0.0), N - 1.0);
      },
      "model");
}

DensityProfile DensityProfile::sampled(double t0, double t1, std::vector<double> values) {
  if (values.size() < 4 || !(t1 > t0)) {
    throw Error(ErrorCode::InvalidArgument, "sampled density needs >= 4 samples on t0 < t1");
  }
  std::vector<double> ts(values.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ts[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(ts.size() - 1);
  }
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
      std::move(ts), std::move(values));
  return DensityProfile(
      [spline, t0, t1](double t) { return (*spline)(std::clamp(t, t0, t1)); }, "sampled");
}

DensityProfile DensityProfile::from_function(std::function<double(double)> fn,
                                             std::string label) {
  return DensityProfile(std::move(fn), std::move(label));
}

DensityProfile DensityProfile::scaled(double c) const {
  auto inner = fn_;
  return DensityProfile([inner, c](double t) { return c * inner(t); }, label_);
}

ShotResult shoot(double p, const DensityProfile& density, double mu, double D) {
  require_exponent(p);
  require_length(D);
  if (!(mu >= 0.0)) throw Error(ErrorCode::InvalidArgument, "mu must be >= 0");
  const double a0 = density(0.0);
  if (!(a0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "density must be positive at t = 0");
  return integrate(p, density, a0, mu, D, false, 0).shot;
}

EigenResult principal_eigenvalue(double p, const DensityProfile& density, double D,
                                 const EigenOptions& options) {
  const Prepared prep = prepare(p, density, D);
  EigenResult result;
  result.t_end = prep.t_end;
  result.degenerate_endpoint = prep.degenerate;
  if (prep.degenerate) {
    result.diagnostics.push_back("density vanishes at D; integration stops 1e-9 short of D");
  }

  auto event = [&](double mu) {
    return integrate(p, density, prep.a0, mu, prep.t_end, true, 0).shot.first_critical;
  };

  const double mu_max = 1e6 / std::pow(D, p);
  double lo = 0.0;
  double hi = std::pow(std::numbers::pi / (2.0 * D), p) * (p - 1.0);
  std::optional<double> hi_event = event(hi);
  while (!hi_event) {
    lo = hi;
    hi *= 2.0;
    if (hi > mu_max) {
      throw Error(ErrorCode::NoConvergence,
                  "no eigenvalue bracket below 1e6 / D^p; density may be pathological");
    }
    hi_event = event(hi);
    ++result.iterations;
  }

  double last_event_time = *hi_event;
  bool non_monotone = false;
  while (hi - lo > options.relative_width * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    ++result.iterations;
    if (const auto t_crit = event(mid)) {
      if (*t_crit < last_event_time - 1e-9 * D) non_monotone = true;
      last_event_time = *t_crit;
      hi = mid;
    } else {
      lo = mid;
    }
  }
  if (non_monotone) {
    result.diagnostics.push_back("event time was not monotone in mu during bisection");
  }

  result.mu_lo = lo;
  result.mu_hi = hi;
  result.mu = 0.5 * (lo + hi);

  const int samples = std::max(options.samples, 5);
  const Trajectory tr = integrate(p, density, prep.a0, lo, prep.t_end, false, samples);
  const double peak = tr.u_samples.maxCoeff();
  result.phi = tr.u_samples / peak;
  if (prep.degenerate) {
    result.endpoint_residual = std::abs(tr.v_samples[samples - 1]) / tr.v_samples.cwiseAbs().maxCoeff();
  } else {
    result.endpoint_residual = std::abs(tr.shot.dphi_end) / peak;
  }
  return result;
}

EigenResult model_eigenvalue(double p, double N, double kappa, double lambda, double D,
                             const EigenOptions& options) {
  if (is_infinite_dimension(N)) return free_eigenvalue(p, D, options);
  const double cbar = truncation_radius(kappa, lambda);
  if (!(D > 0.0) || D > cbar * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "D must lie in (0, C_bar]");
  }
  return principal_eigenvalue(p, DensityProfile::model(N, kappa, lambda), std::min(D, cbar),
                              options);
}

EigenResult free_eigenvalue(double p, double D, const EigenOptions& options) {
  return principal_eigenvalue(p, DensityProfile::constant(), D, options);
}

double fd_oracle_p2(const DensityProfile& density, double D, int mesh) {
  require_length(D);
  if (mesh < 100) throw Error(ErrorCode::InvalidArgument, "fd oracle needs mesh >= 100");
  const int m = mesh;
  const double h = D / m;
  Eigen::VectorXd mass(m), half(m);
  for (int i = 0; i < m; ++i) {
    mass[i] = density((i + 1) * h);
    half[i] = density((i + 0.5) * h);  // a at the midpoint left of node i+1
  }
  if (!(mass.minCoeff() > 0.0) || !(half.minCoeff() > 0.0) || !mass.allFinite()) {
    throw Error(ErrorCode::InvalidArgument, "fd oracle requires positive density samples");
  }
  mass[m - 1] *= 0.5;

  // Nodes 1..m map to indices 0..m-1. Stiffness diagonal and off-diagonal.
  const double ih2 = 1.0 / (h * h);
  Eigen::VectorXd diag(m), off(m - 1);
  for (int i = 0; i < m; ++i) {
    const double right = i + 1 < m ? half[i + 1] : 0.0;
    diag[i] = (half[i] + right) * ih2 / mass[i];
  }
  for (int i = 0; i + 1 < m; ++i) {
    off[i] = -half[i + 1] * ih2 / std::sqrt(mass[i] * mass[i + 1]);
  }

  auto count_below = [&](double x) {
    int count = 0;
    double q = diag[0] - x;
    if (q < 0.0) ++count;
    for (int i = 1; i < m; ++i) {
      if (q == 0.0) q = std::numeric_limits<double>::min();
      q = diag[i] - x - off[i - 1] * off[i - 1] / q;
      if (q < 0.0) ++count;
    }
    return count;
  };

  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < m; ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < m ? std::abs(off[i]) : 0.0);
    hi = std::max(hi, diag[i] + radius);
  }
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (count_below(mid) >= 1) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

double rayleigh_quotient(double p, const DensityProfile& density, const Eigen::VectorXd& phi,
                         double D) {
  require_exponent(p);
  require_length(D);
  const Eigen::Index n = phi.size();
  if (n < 5) throw Error(ErrorCode::InvalidArgument, "need at least 5 samples of phi");
  const double scale = phi.cwiseAbs().maxCoeff();
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "phi is identically zero");
  if (std::abs(phi[0]) > 1e-12 * scale) {
    throw Error(ErrorCode::InvalidArgument, "phi must vanish at t = 0");
  }
  const double h = D / static_cast<double>(n - 1);
  const auto d = numerics::five_point_derivatives(phi, h);
  Eigen::VectorXd num(n), den(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double a = density(h * static_cast<double>(i));
    num[i] = a * std::pow(std::abs(d.first[i]), p);
    den[i] = a * std::pow(std::abs(phi[i]), p);
  }
  const double denominator = numerics::simpson(den, h);
  if (!(denominator > 0.0)) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  return numerics::simpson(num, h) / denominator;
}

}  // namespace collar
