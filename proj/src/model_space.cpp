#include "collar/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "collar/error.hpp"
#include "collar/numerics.hpp"

namespace collar {

namespace {

constexpr double kSeriesThreshold = 1e-8;

bool is_minus_lambda_squared(double kappa, double lambda) {
  return lambda > 0.0 &&
         std::abs(kappa + lambda * lambda) <= 1e-14 * std::max(1.0, lambda * lambda);
}

void require_n_at_least_two(double N) {
  if (!(N >= 2.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "effective dimension N must be >= 2, got " + std::to_string(N));
  }
}

void require_within_truncation(double kappa, double lambda, double D) {
  const double cbar = truncation_radius(kappa, lambda);
  if (!(D > 0.0) || D > cbar * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange,
                "D must lie in (0, C_bar] with C_bar = " + std::to_string(cbar) +
                    ", got " + std::to_string(D));
  }
}

double power_nm1(double s, double N) { return std::pow(std::max(s, 0.0), N - 1.0); }

}  // namespace

const char* to_string(CurvatureClass c) {
  switch (c) {
    case CurvatureClass::Ball: return "Ball";
    case CurvatureClass::Model: return "Model";
    case CurvatureClass::Neither: return "Neither";
  }
  return "?";
}

void ModelParams::validate() const {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "dimension n must be >= 2");
  if (!is_infinite_dimension(N) && !(N >= n)) {
    throw Error(ErrorCode::InvalidArgument, "effective dimension N must satisfy N >= n or N = inf");
  }
  if (!std::isfinite(kappa) || !std::isfinite(lambda)) {
    throw Error(ErrorCode::InvalidArgument, "kappa and lambda must be finite");
  }
}

ValueAndSlope s_kappa(double kappa, double t) {
  const double x = kappa * t * t;
  if (std::abs(x) < kSeriesThreshold) {
    return {t * (1.0 - x / 6.0 + x * x / 120.0), 1.0 - x / 2.0 + x * x / 24.0};
  }
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    return {std::sin(k * t) / k, std::cos(k * t)};
  }
  const double k = std::sqrt(-kappa);
  return {std::sinh(k * t) / k, std::cosh(k * t)};
}

ValueAndSlope c_kappa(double kappa, double t) {
  const double x = kappa * t * t;
  if (std::abs(x) < kSeriesThreshold) {
    return {1.0 - x / 2.0 + x * x / 24.0, -kappa * t * (1.0 - x / 6.0)};
  }
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    return {std::cos(k * t), -k * std::sin(k * t)};
  }
  const double k = std::sqrt(-kappa);
  return {std::cosh(k * t), k * std::sinh(k * t)};
}

ValueAndSlope s_kappa_lambda(double kappa, double lambda, double t) {
  const double x = kappa * t * t;
  if (kappa < 0.0 && std::abs(x) >= kSeriesThreshold) {
    // Exponential split avoids cancellation in cosh - (lambda/k) sinh when
    // lambda ~ k (the decaying e^{-kt} branch).
    const double k = std::sqrt(-kappa);
    const double r = is_minus_lambda_squared(kappa, lambda) ? 1.0 : lambda / k;
    const double grow = r == 1.0 ? 0.0 : 0.5 * (1.0 - r) * std::exp(k * t);
    const double decay = 0.5 * (1.0 + r) * std::exp(-k * t);
    return {grow + decay, k * (grow - decay)};
  }
  const auto s = s_kappa(kappa, t);
  const auto c = c_kappa(kappa, t);
  return {c.value - lambda * s.value, c.slope - lambda * s.slope};
}

bool ball_condition(double kappa, double lambda) {
  if (kappa > 0.0) return true;
  if (kappa == 0.0) return lambda > 0.0;
  return lambda > std::sqrt(-kappa);
}

bool model_condition(double kappa, double lambda) {
  if (kappa > 0.0) return lambda < 0.0;
  if (kappa == 0.0) return lambda == 0.0;
  return lambda > 0.0 && lambda < std::sqrt(-kappa);
}

CurvatureClass classify(double kappa, double lambda) {
  if (model_condition(kappa, lambda)) return CurvatureClass::Model;
  if (ball_condition(kappa, lambda)) return CurvatureClass::Ball;
  return CurvatureClass::Neither;
}

std::optional<double> ball_radius(double kappa, double lambda) {
  if (!ball_condition(kappa, lambda)) return std::nullopt;
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    return std::atan2(k, lambda) / k;
  }
  if (kappa == 0.0) return 1.0 / lambda;
  const double k = std::sqrt(-kappa);
  return std::atanh(k / lambda) / k;
}

double truncation_radius(double kappa, double lambda) {
  return ball_radius(kappa, lambda).value_or(std::numeric_limits<double>::infinity());
}

ModelCritical model_critical(double kappa, double lambda) {
  if (!model_condition(kappa, lambda)) return {};
  if (kappa == 0.0) return {std::nullopt, true};
  if (kappa > 0.0) {
    const double k = std::sqrt(kappa);
    return {std::atan(-lambda / k) / k, false};
  }
  const double k = std::sqrt(-kappa);
  return {std::atanh(lambda / k) / k, false};
}

double s_bar(double kappa, double lambda, double t) {
  if (t >= truncation_radius(kappa, lambda)) return 0.0;
  return s_kappa_lambda(kappa, lambda, t).value;
}

double collar_model_volume(double N, double kappa, double lambda, double r) {
  require_n_at_least_two(N);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "collar radius must be finite and >= 0");
  }
  if (kappa == 0.0 && lambda == 0.0) return r;
  const double upper = std::min(r, truncation_radius(kappa, lambda));
  return numerics::integrate(
      [=](double t) { return power_nm1(s_kappa_lambda(kappa, lambda, t).value, N); },
      0.0, upper);
}

double kasue_constant_closed_form(double N, double lambda, double D) {
  const double rate = (N - 1.0) * lambda;
  if (std::isinf(D)) return 1.0 / rate;
  return -std::expm1(-rate * D) / rate;
}

double kasue_constant_scan(double N, double kappa, double lambda, double D) {
  require_n_at_least_two(N);
  require_within_truncation(kappa, lambda, D);
  auto density = [=](double t) { return power_nm1(s_kappa_lambda(kappa, lambda, t).value, N); };
  auto ratio = [&](double t) {
    return numerics::integrate(density, t, D) / density(t);
  };
  return numerics::scan_and_refine_max(ratio, 0.0, D, 4096, false).value;
}

double kasue_constant(double N, double kappa, double lambda, double D) {
  require_n_at_least_two(N);
  if (std::isinf(D)) {
    if (!is_minus_lambda_squared(kappa, lambda)) {
      throw Error(ErrorCode::OutOfRange,
                  "C(N,kappa,lambda,inf) is finite only for kappa < 0 and lambda = sqrt(|kappa|)");
    }
    return kasue_constant_closed_form(N, lambda, D);
  }
  require_within_truncation(kappa, lambda, D);
  if (is_minus_lambda_squared(kappa, lambda)) return kasue_constant_closed_form(N, lambda, D);
  return kasue_constant_scan(N, kappa, lambda, D);
}

double kasue_computable_bound(double N, double kappa, double lambda, double D) {
  require_n_at_least_two(N);
  require_within_truncation(kappa, lambda, D);
  auto density = [=](double t) { return power_nm1(s_kappa_lambda(kappa, lambda, t).value, N); };
  auto inverse = [=](double t) {
    return std::pow(s_kappa_lambda(kappa, lambda, t).value, 1.0 - N);
  };
  auto product = [&](double t) {
    return numerics::integrate(density, t, D) * numerics::integrate(inverse, 0.0, t);
  };
  const bool degenerate_end = D >= truncation_radius(kappa, lambda) * (1.0 - 1e-12);
  const double best = numerics::scan_and_refine_max(product, 0.0, D, 4096, !degenerate_end).value;
  return 1.0 / (4.0 * best);
}

}  // namespace collar
