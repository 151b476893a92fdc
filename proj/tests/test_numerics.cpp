#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "collar/error.hpp"
#include "collar/numerics.hpp"

using namespace collar;
using doctest::Approx;

TEST_SUITE("numerics") {

TEST_CASE("integrate polynomial and exponential") {
  CHECK(numerics::integrate([](double t) { return t * t * t * t; }, 0.0, 1.0) ==
        Approx(0.2).epsilon(1e-14));
  CHECK(numerics::integrate([](double t) { return std::exp(-2.0 * t); }, 0.0, 1.0) ==
        Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-13));
  CHECK(numerics::integrate([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("integrate terminates on integrands vanishing at the end") {
  long calls = 0;
  auto fn = [&](double t) {
    ++calls;
    const double s = 1.0 - t;
    return s * s * s * s;
  };
  for (double a : {0.999, 1.0 - 1e-6, 1.0 - 1e-10}) {
    calls = 0;
    const double v = numerics::integrate(fn, a, 1.0);
    CHECK(v == Approx(std::pow(1.0 - a, 5) / 5.0).epsilon(1e-6));
    CHECK(calls < 1000);
  }
}

TEST_CASE("integrate kink") {
  const double v = numerics::integrate([](double t) { return std::abs(t - 0.3); }, 0.0, 1.0);
  CHECK(v == Approx(0.5 * (0.09 + 0.49)).epsilon(1e-10));
}

TEST_CASE("integrate rejects non-finite values") {
  CHECK_THROWS_AS(numerics::integrate([](double t) { return 1.0 / (t - t); }, 0.0, 1.0),
                  Error);
}

TEST_CASE("scan and refine finds interior and endpoint maxima") {
  const auto inner = numerics::scan_and_refine_max([](double t) { return t * (1.0 - t); }, 0.0, 1.0);
  CHECK(inner.arg == Approx(0.5).epsilon(1e-7));
  CHECK(inner.value == Approx(0.25).epsilon(1e-14));
  const auto edge = numerics::scan_and_refine_max([](double t) { return t; }, 0.0, 2.0);
  CHECK(edge.value == Approx(2.0));
  const auto open = numerics::scan_and_refine_max([](double t) { return t; }, 0.0, 2.0, 4096, false);
  CHECK(open.value < 2.0);
  CHECK(open.value > 1.99);
}

TEST_CASE("first positive root") {
  const auto root = numerics::first_positive_root([](double t) { return std::cos(t); }, 10.0);
  REQUIRE(root);
  CHECK(*root == Approx(std::numbers::pi / 2).epsilon(1e-13));
  // tan t = 1
  const auto quarter =
      numerics::first_positive_root([](double t) { return std::cos(t) - std::sin(t); }, 10.0);
  REQUIRE(quarter);
  CHECK(*quarter == Approx(std::numbers::pi / 4).epsilon(1e-13));
  CHECK_FALSE(numerics::first_positive_root([](double t) { return 1.0 + t; }, 10.0));
  CHECK(numerics::bisect_root([](double t) { return t * t - 2.0; }, 0.0, 2.0, 1e-14) ==
        Approx(std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("five point derivatives are exact on quartics") {
  const int n = 41;
  const double h = 0.05;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    v[i] = t * t * t * t - 3.0 * t * t + t;
  }
  const auto d = numerics::five_point_derivatives(v, h);
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    CHECK(d.first[i] == Approx(4 * t * t * t - 6 * t + 1).epsilon(1e-9));
    CHECK(d.second[i] == Approx(12 * t * t - 6).epsilon(1e-7));
  }
}

TEST_CASE("simpson") {
  Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(101, 0.0, 1.0).array().square();
  CHECK(numerics::simpson(v, 0.01) == Approx(1.0 / 3.0).epsilon(1e-14));
  Eigen::VectorXd odd = Eigen::VectorXd::LinSpaced(100, 0.0, 99.0).array();
  CHECK(numerics::simpson(odd, 1.0) == Approx(99.0 * 99.0 / 2.0).epsilon(1e-12));
}

}
