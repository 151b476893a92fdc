#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "collar/warped_product.hpp"

namespace collar {

// Config files use a small TOML subset:
//
//   [suite]            grid, tolerance, gate_tolerance, threads
//   [output]           json, csv
//   [manifold.NAME]    kind = "rigidity" | "model" | "product" | "custom" | "perturbed"
//   [[check]]          name, manifold, tolerance, p, N, kappa, lambda, D, a, b,
//                      radii, pairs, D_grid
//   [sweep]            p, N, kappa, lambda, D (arrays), checks, tolerance
//
// Values are numbers (inf allowed), booleans, "strings" and arrays.

struct ManifoldSpec {
  std::string name;
  std::string kind = "rigidity";
  int n = 3;
  /// Defaults to n (inf for a product).
  std::optional<double> N;
  double kappa = 0.0;
  double lambda = 0.0;
  double L = 1.0;
  double f0 = 0.0;
  /// custom: expressions in t, or uniform sample tables on [0, L].
  std::string w;
  std::string f;
  std::vector<double> w_samples;
  std::vector<double> f_samples;
  std::optional<double> fiber_kappa;
  std::optional<double> fiber_volume;
  bool second_boundary = false;
  /// perturbed
  std::uint64_t seed = 0;
  double amplitude = 0.3;

  double effective_N() const {
    if (N) return *N;
    return kind == "product" ? kInfiniteDimension : static_cast<double>(n);
  }
  bool operator==(const ManifoldSpec&) const = default;
};

struct CheckSpec {
  std::string name;
  std::string manifold;
  std::map<std::string, double> values;
  std::vector<double> radii;
  std::vector<std::array<double, 2>> pairs;
  std::vector<double> D_grid;
  std::optional<double> tolerance;

  bool operator==(const CheckSpec&) const = default;
};

struct SweepSpec {
  std::vector<double> p{2.0};
  std::vector<double> N;
  std::vector<double> kappa;
  std::vector<double> lambda;
  std::vector<double> D;
  std::vector<std::string> checks;
  std::optional<double> tolerance;

  bool operator==(const SweepSpec&) const = default;
};

struct SuiteSettings {
  int grid = 1024;
  double tolerance = 1e-8;
  double gate_tolerance = 1e-9;
  /// 0: one per hardware thread.
  int threads = 0;

  bool operator==(const SuiteSettings&) const = default;
};

struct OutputSpec {
  std::string json;
  std::string csv;

  bool operator==(const OutputSpec&) const = default;
};

struct SuiteConfig {
  SuiteSettings suite;
  OutputSpec output;
  std::vector<ManifoldSpec> manifolds;
  std::vector<CheckSpec> checks;
  std::optional<SweepSpec> sweep;

  const ManifoldSpec* find_manifold(std::string_view name) const;
  bool operator==(const SuiteConfig&) const = default;
};

const std::vector<std::string>& known_checks();
bool is_parameter_check(std::string_view name);

/// ConfigSyntax errors carry "line N:"; ConfigSemantic errors carry the key
/// path ("manifold.NAME.L", "check[2].name", ...).
SuiteConfig parse_config(std::string_view text);
SuiteConfig load_config(const std::string& path);
std::string serialize(const SuiteConfig& config);

/// Errors are reported as ConfigSemantic with the manifold's key path.
WarpedManifold build_manifold(const ManifoldSpec& spec);

}  // namespace collar
