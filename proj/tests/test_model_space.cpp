#include <doctest.h>

#include <cmath>
#include <numbers>

#include "collar/error.hpp"
#include "collar/model_space.hpp"

using namespace collar;
using doctest::Approx;

TEST_SUITE("model_space") {

TEST_CASE("generalized sine and cosine") {
  CHECK(s_kappa(1.0, 0.3).value == Approx(std::sin(0.3)).epsilon(1e-15));
  CHECK(s_kappa(-4.0, 0.3).value == Approx(std::sinh(0.6) / 2.0).epsilon(1e-15));
  CHECK(s_kappa(0.0, 0.3).value == Approx(0.3));
  CHECK(c_kappa(-1.0, 0.7).slope == Approx(std::sinh(0.7)).epsilon(1e-15));
  // series branch agrees with the closed form across the switch
  for (double t : {1e-9, 1e-5, 1e-3, 0.05, 0.2}) {
    CHECK(s_kappa(2.0, t).value == Approx(std::sin(std::sqrt(2.0) * t) / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(c_kappa(-3.0, t).value == Approx(std::cosh(std::sqrt(3.0) * t)).epsilon(1e-14));
  }
}

TEST_CASE("s_kappa_lambda values") {
  CHECK(std::abs(s_kappa_lambda(1.0, 0.0, std::numbers::pi / 2).value) < 1e-15);
  const auto affine = s_kappa_lambda(0.0, 1.0, 0.5);
  CHECK(affine.value == Approx(0.5));
  CHECK(affine.slope == Approx(-1.0));
  CHECK(s_kappa_lambda(-1.0, 1.0, 1.0).value == Approx(std::exp(-1.0)).epsilon(1e-14));
}

TEST_CASE("classification") {
  CHECK(classify(0.0, 1.0) == CurvatureClass::Ball);
  CHECK(classify(-1.0, 0.5) == CurvatureClass::Model);
  CHECK(classify(-1.0, 1.0) == CurvatureClass::Neither);
  CHECK(classify(1.0, -1.0) == CurvatureClass::Model);
  CHECK(classify(1.0, 0.0) == CurvatureClass::Ball);
  CHECK(classify(0.0, 0.0) == CurvatureClass::Model);
  CHECK(std::string(to_string(CurvatureClass::Neither)) == "Neither");
}

TEST_CASE("ball radius") {
  CHECK(*ball_radius(1.0, 0.0) == Approx(std::numbers::pi / 2).epsilon(1e-13));
  CHECK(*ball_radius(0.0, 2.0) == Approx(0.5).epsilon(1e-13));
  CHECK(*ball_radius(-1.0, 2.0) == Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK(*ball_radius(-1.0, 2.0) == Approx(0.5493061).epsilon(1e-7));
  CHECK_FALSE(ball_radius(-1.0, 0.5));
  CHECK_FALSE(ball_radius(-1.0, 1.0));
  CHECK(std::isinf(truncation_radius(-1.0, 1.0)));
}

TEST_CASE("model critical radius") {
  CHECK(*model_critical(1.0, -1.0).radius == Approx(std::numbers::pi / 4).epsilon(1e-12));
  CHECK(*model_critical(-1.0, 0.5).radius == Approx(std::atanh(0.5)).epsilon(1e-12));
  CHECK_FALSE(model_critical(0.0, 1.0).radius);
  CHECK(model_critical(0.0, 0.0).degenerate_flat);
}

TEST_CASE("collar model volume") {
  CHECK(collar_model_volume(5.0, 0.0, 0.0, 2.0) == Approx(2.0).epsilon(1e-13));
  CHECK(collar_model_volume(3.0, -1.0, 1.0, 1.0) ==
        Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-12));
  CHECK(collar_model_volume(3.0, -1.0, 1.0, 1.0) == Approx(0.4323324).epsilon(1e-7));
  // truncated at pi / 2
  CHECK(collar_model_volume(2.0, 1.0, 0.0, std::numbers::pi) == Approx(1.0).epsilon(1e-12));
  CHECK(s_bar(1.0, 0.0, 2.0) == 0.0);
}

TEST_CASE("kasue constant closed form") {
  CHECK(kasue_constant_closed_form(2.0, 1.0, 1.0) == Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(kasue_constant_closed_form(2.0, 1.0, 1.0) == Approx(0.6321206).epsilon(1e-7));
  CHECK(kasue_constant_closed_form(2.0, 1.0, INFINITY) == Approx(1.0));
  CHECK(kasue_constant(2.0, -1.0, 1.0, INFINITY) == Approx(1.0));
}

TEST_CASE("kasue constant scan") {
  CHECK(kasue_constant_scan(3.0, 0.0, 0.0, 1.0) == Approx(1.0).epsilon(1e-12));
  for (double N : {2.0, 3.0, 5.0}) {
    for (double lambda : {0.5, 1.0}) {
      for (double D : {0.5, 1.0, 5.0}) {
        CHECK(kasue_constant_scan(N, -lambda * lambda, lambda, D) ==
              Approx(kasue_constant_closed_form(N, lambda, D)).epsilon(1e-9));
      }
    }
  }
  // D = C_bar: the ratio degenerates at the end but the sup is interior or at 0
  CHECK(kasue_constant(5.0, 0.0, 1.0, 1.0) == Approx(0.2).epsilon(1e-10));
}

TEST_CASE("kasue computable bound") {
  // 4 max_t (1 - t) t = 1 for the flat family on [0, 1]
  CHECK(kasue_computable_bound(3.0, 0.0, 0.0, 1.0) == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ModelParams{1, 2.0, 0.0, 0.0}.validate()), Error);
  CHECK_THROWS_AS((ModelParams{3, 2.0, 0.0, 0.0}.validate()), Error);
  CHECK_NOTHROW((ModelParams{3, kInfiniteDimension, 0.0, 0.0}.validate()));
}

}
