#include "collar/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Core>

#include "collar/error.hpp"
#include "collar/expression.hpp"
#include "collar/model_space.hpp"
#include "collar/numerics.hpp"

namespace collar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Profile::Profile(std::function<Jet(double)> fn, std::string label, bool constant, bool sampled,
                 double begin, double end)
    : fn_(std::move(fn)),
      label_(std::move(label)),
      constant_(constant),
      sampled_(sampled),
      begin_(begin),
      end_(end) {}

Profile Profile::constant(double c) {
  return Profile([c](double) { return Jet(c); }, format_number(c), true, false, -kInf, kInf);
}

Profile Profile::closed_form(std::function<Jet(const Jet&)> fn, std::string label) {
  return Profile([fn = std::move(fn)](double t) { return fn(Jet::variable(t)); },
                 std::move(label), false, false, -kInf, kInf);
}

Profile Profile::expression(std::string_view text) {
  auto expr = Expression::parse(text);
  const bool constant = !expr.depends_on_t();
  return Profile([expr](double t) { return expr.evaluate(Jet::variable(t)); },
                 std::string(text), constant, false, -kInf, kInf);
}

Profile Profile::sampled(double t0, double t1, std::vector<double> values) {
  if (values.size() < 5) {
    throw Error(ErrorCode::ProfileNotDifferentiable,
                "sampled profile needs at least 5 points for 5-point stencils");
  }
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "sampled profile needs t0 < t1");
  const Eigen::Index n = static_cast<Eigen::Index>(values.size());
  Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(values.data(), n);
  if (!y.allFinite()) throw Error(ErrorCode::InvalidArgument, "sampled profile has non-finite values");
  const double h = (t1 - t0) / static_cast<double>(n - 1);
  auto d = numerics::five_point_derivatives(y, h);
  const bool constant = (y.array() == y[0]).all();

  struct Table {
    Eigen::VectorXd y, d1, d2;
  };
  auto table = std::make_shared<const Table>(Table{std::move(y), std::move(d.first), std::move(d.second)});

  auto fn = [table, t0, t1, h, n](double t) {
    t = std::clamp(t, t0, t1);
    Eigen::Index i = std::min<Eigen::Index>(static_cast<Eigen::Index>((t - t0) / h), n - 2);
    const double s = (t - (t0 + static_cast<double>(i) * h)) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    const auto& T = *table;
    const double value = h00 * T.y[i] + h10 * h * T.d1[i] + h01 * T.y[i + 1] + h11 * h * T.d1[i + 1];
    const double first =
        h00 * T.d1[i] + h10 * h * T.d2[i] + h01 * T.d1[i + 1] + h11 * h * T.d2[i + 1];
    const double second = (1.0 - s) * T.d2[i] + s * T.d2[i + 1];
    return Jet(value, first, second);
  };
  return Profile(fn, "table[" + std::to_string(n) + "]", constant, true, t0, t1);
}

Profile Profile::jacobi(double kappa, double lambda) {
  return Profile(
      [kappa, lambda](double t) {
        const auto s = s_kappa_lambda(kappa, lambda, t);
        return Jet(s.value, s.slope, -kappa * s.value);
      },
      "s(" + format_number(kappa) + "," + format_number(lambda) + ")", false, false, -kInf, kInf);
}

Profile Profile::log_jacobi(double f0, double coefficient, double kappa, double lambda) {
  if (coefficient == 0.0) return constant(f0);
  return Profile(
      [=](double t) {
        const auto s = s_kappa_lambda(kappa, lambda, t);
        return Jet(f0) - Jet(coefficient) * log(Jet(s.value, s.slope, -kappa * s.value));
      },
      format_number(f0) + "-" + format_number(coefficient) + "*log(s(" + format_number(kappa) +
          "," + format_number(lambda) + "))",
      false, false, -kInf, kInf);
}

}  // namespace collar
