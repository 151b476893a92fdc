#include <doctest.h>

#include <cmath>

#include "collar/error.hpp"
#include "collar/expression.hpp"
#include "collar/jet.hpp"
#include "collar/profile.hpp"

using namespace collar;
using doctest::Approx;

TEST_SUITE("profile") {

TEST_CASE("expression grammar") {
  const auto e = Expression::parse("-2*t + pow(t, 3)/4 - exp(-t)*cos(pi*t)");
  const double t = 0.7;
  CHECK(e.evaluate(t) == Approx(-2 * t + t * t * t / 4 - std::exp(-t) * std::cos(M_PI * t)));
  CHECK(e.depends_on_t());
  CHECK_FALSE(Expression::parse("sinh(1) + log(2)").depends_on_t());
  CHECK(Expression::parse("1e-3 * 2").evaluate(0.0) == Approx(2e-3));
  for (const char* bad : {"", "t +", "foo(t)", "(t", "t t", "2 ** t", "cos t"}) {
    CAPTURE(bad);
    try {
      Expression::parse(bad);
      FAIL("accepted");
    } catch (const Error& err) {
      CHECK(err.code() == ErrorCode::ExpressionSyntax);
    }
  }
}

TEST_CASE("expressions differentiate exactly on jets") {
  const auto p = Profile::expression("exp(-t)*(1 - 0.2*t*t*t)");
  const double t = 0.6;
  const Jet j = p(t);
  const double g = 1 - 0.2 * t * t * t, dg = -0.6 * t * t, ddg = -1.2 * t;
  CHECK(j.v == Approx(std::exp(-t) * g));
  CHECK(j.d1 == Approx(std::exp(-t) * (dg - g)));
  CHECK(j.d2 == Approx(std::exp(-t) * (ddg - 2 * dg + g)));
}

TEST_CASE("jacobi profiles") {
  const auto s = Profile::jacobi(-1.0, 1.0);
  const Jet j = s(0.4);
  CHECK(j.v == Approx(std::exp(-0.4)));
  CHECK(j.d1 == Approx(-std::exp(-0.4)));
  CHECK(j.d2 == Approx(std::exp(-0.4)));
  const auto f = Profile::log_jacobi(0.5, 2.0, 0.0, 1.0);
  const Jet k = f(0.25);
  CHECK(k.v == Approx(0.5 - 2.0 * std::log(0.75)));
  CHECK(k.d1 == Approx(2.0 / 0.75));
  CHECK(k.d2 == Approx(2.0 / (0.75 * 0.75)));
}

TEST_CASE("sampled profiles") {
  std::vector<double> values(101);
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::sin(i / 100.0);
  const auto p = Profile::sampled(0.0, 1.0, values);
  CHECK(p.is_sampled());
  CHECK(p.domain_end() == 1.0);
  const Jet j = p(0.537);
  CHECK(j.v == Approx(std::sin(0.537)).epsilon(1e-9));
  CHECK(j.d1 == Approx(std::cos(0.537)).epsilon(1e-7));
  CHECK(j.d2 == Approx(-std::sin(0.537)).epsilon(1e-4));
  CHECK_THROWS_AS(Profile::sampled(0.0, 1.0, {1, 2, 3}), Error);
}

TEST_CASE("constants") {
  const auto c = Profile::constant(2.5);
  CHECK(c.is_constant());
  CHECK(c(3.0).v == 2.5);
  CHECK(c(3.0).d1 == 0.0);
  CHECK(Profile::expression("3*2").is_constant());
}

}
