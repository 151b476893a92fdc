#include <doctest.h>

#include <cmath>
#include <string>

#include "collar/config.hpp"
#include "collar/error.hpp"

using namespace collar;
using doctest::Approx;

namespace {

const char* kMinimal = R"toml(
[manifold.h]
n = 3
N = 3
kappa = -1
lambda = 1
L = 2

[[check]]
name = "theta_comparison"
manifold = "h"
)toml";

// Parses `text` and returns the error, failing the test if none is raised.
Error parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    return e;
  }
  FAIL("config was accepted");
  return Error(ErrorCode::InvalidArgument, "");
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_SUITE("config") {

TEST_CASE("minimal config with defaults") {
  const SuiteConfig c = parse_config(kMinimal);
  CHECK(c.suite.grid == 1024);
  CHECK(c.suite.tolerance == 1e-8);
  CHECK(c.suite.gate_tolerance == 1e-9);
  REQUIRE(c.manifolds.size() == 1);
  CHECK(c.manifolds[0].kind == "rigidity");
  CHECK(c.manifolds[0].effective_N() == 3.0);
  REQUIRE(c.checks.size() == 1);
  CHECK(c.checks[0].manifold == "h");
  CHECK_FALSE(c.sweep);
  CHECK(c.find_manifold("h"));
  CHECK_FALSE(c.find_manifold("x"));
}

TEST_CASE("empty config") {
  const SuiteConfig c = parse_config("# nothing\n");
  CHECK(c.manifolds.empty());
  CHECK(c.checks.empty());
}

TEST_CASE("all value kinds") {
  const SuiteConfig c = parse_config(R"toml(
[suite]
grid = 512
threads = 2

[output]
json = "out.json"
csv = "out.csv"

[manifold.p]
kind = "product"
n = 4
L = 1.5

[manifold.c]
kind = "custom"
n = 3
N = inf
L = 1
w = "cosh(t)"
f = "2*t*t"
fiber_kappa = 1
second_boundary = true

[manifold.s]
kind = "custom"
n = 2
L = 1
w_samples = [1, 1.1, 1.2, 1.3, 1.4]

[manifold.r]
kind = "perturbed"
n = 3
N = 5
kappa = -1
lambda = 1
L = 0.8
seed = 12345678901234
amplitude = 0.1

[[check]]
name = "bishop_gromov"
manifold = "p"
pairs = [[0.5, 1], [1, 1.5]]
tolerance = 1e-6

[[check]]
name = "spectrum_limit"
N = 2
lambda = 1
D_grid = [1, 2, 4]

[sweep]
N = [2, 3]
kappa = [-1, 0]
lambda = [0, 1]
D = [0.5, 1]
checks = ["kasue_eigen_bounds"]
)toml");
  CHECK(c.suite.grid == 512);
  CHECK(c.suite.threads == 2);
  CHECK(c.output.json == "out.json");
  CHECK(std::isinf(c.find_manifold("p")->effective_N()));
  CHECK(std::isinf(c.find_manifold("c")->effective_N()));
  CHECK(c.find_manifold("c")->second_boundary);
  CHECK(c.find_manifold("s")->w_samples.size() == 5);
  CHECK(c.find_manifold("r")->seed == 12345678901234ULL);
  CHECK(c.checks[0].pairs.size() == 2);
  CHECK(*c.checks[0].tolerance == 1e-6);
  CHECK(c.checks[1].D_grid == std::vector<double>{1, 2, 4});
  REQUIRE(c.sweep);
  CHECK(c.sweep->p == std::vector<double>{2.0});
  CHECK(c.sweep->N.size() == 2);
}

TEST_CASE("round trip") {
  const SuiteConfig c = load_config(COLLAR_SOURCE_DIR "/configs/default_suite.toml");
  CHECK(c.manifolds.size() > 5);
  const std::string text = serialize(c);
  const SuiteConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(serialize(back) == text);

  const SuiteConfig minimal = parse_config(kMinimal);
  CHECK(parse_config(serialize(minimal)) == minimal);
}

TEST_CASE("syntax errors carry the line") {
  Error e = parse_error("[suite]\ngrid = [1, 2\n");
  CHECK(e.code() == ErrorCode::ConfigSyntax);
  CHECK(contains(e.what(), "line 2"));
  e = parse_error("[suite]\n\ngrid 12\n");
  CHECK(e.code() == ErrorCode::ConfigSyntax);
  CHECK(contains(e.what(), "line 3"));
  e = parse_error("[manifold.a]\nw = \"cosh(t)\n");
  CHECK(e.code() == ErrorCode::ConfigSyntax);
  e = parse_error("[suite\n");
  CHECK(e.code() == ErrorCode::ConfigSyntax);
}

TEST_CASE("semantic errors carry the key path") {
  Error e = parse_error("[manifold.b]\nn = 3\nkappa = 0\nlambda = 1\nL = 1.5\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);
  CHECK(contains(e.what(), "manifold.b.L (line 5)"));
  CHECK(contains(e.what(), "C_bar"));

  e = parse_error(std::string(kMinimal) + "\n[[check]]\nname = \"bogus\"\nmanifold = \"h\"\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);
  CHECK(contains(e.what(), "check[1].name"));
  CHECK(contains(e.what(), "heintze_karcher"));
  CHECK(contains(e.what(), "spectrum_limit"));

  e = parse_error("[[check]]\nname = \"theta_comparison\"\nmanifold = \"nope\"\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);
  CHECK(contains(e.what(), "check[0].manifold"));

  e = parse_error("[manifold.a]\nn = 3\nN = 2\n");
  CHECK(contains(e.what(), "manifold.a.N"));

  e = parse_error("[manifold.a]\nn = 3\ncolour = 2\n");
  CHECK(contains(e.what(), "manifold.a.colour"));

  e = parse_error("[manifold.a]\nkind = \"custom\"\nn = 3\nL = 2\nw = \"cos(t)\"\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);
  CHECK(contains(e.what(), "manifold.a"));

  e = parse_error("[manifold.a]\nkind = \"custom\"\nn = 3\nw = \"cos(t\"\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);

  e = parse_error("[[check]]\nname = \"kasue_eigen_bounds\"\np = 1\n");
  CHECK(contains(e.what(), "p must be > 1"));

  e = parse_error("[sweep]\nN = []\nchecks = [\"kasue_eigen_bounds\"]\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);

  e = parse_error("[mystery]\n");
  CHECK(e.code() == ErrorCode::ConfigSemantic);
}

TEST_CASE("missing file") {
  CHECK_THROWS_AS(load_config("/nonexistent/suite.toml"), Error);
}

TEST_CASE("build_manifold") {
  const SuiteConfig c = load_config(COLLAR_SOURCE_DIR "/configs/default_suite.toml");
  for (const ManifoldSpec& m : c.manifolds) {
    CAPTURE(m.name);
    CHECK_NOTHROW(build_manifold(m));
  }
  ManifoldSpec bad;
  bad.name = "bad";
  bad.kind = "custom";
  bad.w = "1 - t";
  bad.L = 2.0;
  try {
    build_manifold(bad);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigSemantic);
    CHECK(contains(e.what(), "manifold.bad"));
  }
}

TEST_CASE("known checks") {
  CHECK(known_checks().size() == 9);
  CHECK(is_parameter_check("kasue_eigen_bounds"));
  CHECK(is_parameter_check("spectrum_limit"));
  CHECK_FALSE(is_parameter_check("theta_comparison"));
}

}
