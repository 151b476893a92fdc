// One line per acceptance criterion; exit status 1 if any is red.

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include <rapidjson/document.h>

#include "collar/model_space.hpp"
#include "collar/sturm_liouville.hpp"
#include "collar/verification.hpp"
#include "collar/warped_product.hpp"

using namespace collar;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      if (!ok) detail << "; ";
      detail << "FAILED " << what;
      ok = false;
    }
  }
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// |a - b| relative to max(1, |b|).
double mixed(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Outcome criterion1() {
  Outcome o;
  double worst = 0.0;
  const auto start = std::chrono::steady_clock::now();
  for (double D : {0.5, 1.0, 2.0, 5.0}) {
    worst = std::max(worst, rel(free_eigenvalue(2.0, D).mu, kPi * kPi / (4 * D * D)));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(worst < 1e-8, "relative error");
  o.require(seconds < 1.0, "runtime");
  o.detail << " max rel err " << worst << ", " << seconds << " s";
  return o;
}

Outcome criterion2() {
  Outcome o;
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    // smooth positive densities: exponential trend, oscillation, a model factor
    const double alpha = 4.0 * u(rng) - 2.0;
    const double beta = 0.8 * u(rng);
    const double gamma = 1.0 + 6.0 * u(rng);
    const double delta = 2.0 * kPi * u(rng);
    const double power = 3.0 * u(rng);
    const double D = 0.3 + 2.7 * u(rng);
    const auto a = DensityProfile::from_function(
        [=](double t) {
          return std::exp(alpha * t + beta * std::sin(gamma * t + delta)) * std::pow(1.0 + 0.5 * t, power);
        },
        "seeded");
    worst = std::max(worst, rel(principal_eigenvalue(2.0, a, D).mu, fd_oracle_p2(a, D, 4000)));
  }
  o.require(worst < 1e-4, "shooting vs finite differences");
  o.detail << " 20 densities, max rel diff " << worst;
  return o;
}

Outcome criterion3() {
  Outcome o;
  double worst = 0.0;
  bool monotone = true;
  for (double N : {2.0, 3.0, 5.0}) {
    for (double lambda : {0.5, 1.0}) {
      double previous = 0.0;
      for (double D : {0.5, 1.0, 5.0}) {
        const double scan = kasue_constant_scan(N, -lambda * lambda, lambda, D);
        const double closed = 1.0 / ((N - 1) * lambda) * (1.0 - std::exp(-(N - 1) * lambda * D));
        worst = std::max(worst, rel(scan, closed));
        monotone = monotone && scan > previous;
        previous = scan;
      }
    }
  }
  o.require(worst < 1e-6, "scan vs closed form");
  o.require(monotone, "monotone in D");
  o.detail << " 18 points, max rel err " << worst;
  return o;
}

Outcome criterion4() {
  Outcome o;
  const int n = 3;
  const auto M = build(n, FiberSpec{n - 1, 1.0, 4 * kPi}, 2.5, Profile::expression("cosh(t)"),
                       Profile::expression("2*t*t"));
  double worst = 0.0;
  for (double l : {0.0, 0.5, 1.0, 2.0}) {
    const auto c = ricci_components(M, l);
    const double sh = std::sinh(l), ch = std::cosh(l);
    worst = std::max({worst, mixed(c.ric_fiber, (n - 2) * (1 - sh * sh) / (ch * ch) - 1),
                      mixed(c.hess_fiber, 2.0 * (n - 1) * l * sh / ch),
                      mixed(c.ric_radial, -(n - 1.0)), mixed(c.hess_radial, 2.0 * (n - 1))});
  }
  const double h = weighted_mean_curvature(M, BoundarySide::Zero);
  const double margin = curvature_margin(M, kInfiniteDimension, 0.0, 1024).margin;
  o.require(worst <= 1e-8, "curvature formulas");
  o.require(std::abs(h) <= 1e-12, "H_f(0)");
  o.require(margin >= -1e-9, "curvature margin");
  o.detail << " formula err " << worst << ", H_f(0) " << h << ", margin " << margin;
  return o;
}

Outcome criterion5() {
  Outcome o;
  struct Case {
    int n;
    double N, kappa, lambda, L;
  };
  double worst = 0.0;
  for (const Case& c : {Case{3, 3, -1, 1, 2}, Case{3, 5, -1, 1, 1}, Case{3, 4, 0, 1, 0.8},
                        Case{4, 4, 1, 0, 1.2}}) {
    const double f0 = 0.3;
    const auto M = make_rigidity_model(c.n, c.N, c.kappa, c.lambda, c.L, f0);
    double ric = 0.0, theta = 0.0;
    for (int i = 1; i < 64; ++i) {
      const double t = c.L * i / 64.0;
      ric = std::max(ric, mixed(bakry_emery_ricci(M, c.N, t, Direction::Radial), (c.N - 1) * c.kappa));
      theta = std::max(theta, rel(theta_f(M, t), std::exp(-f0) * std::pow(s_kappa_lambda(c.kappa, c.lambda, t).value, c.N - 1)));
    }
    const double hf = mixed(weighted_mean_curvature(M, BoundarySide::Zero), (c.N - 1) * c.lambda);
    const auto hk = check_heintze_karcher(M, c.N, c.kappa, c.lambda);
    const auto bg = check_bishop_gromov(M, c.N, c.kappa, c.lambda);
    const auto vg = check_volume_growth_equality(M, c.N, c.kappa, c.lambda);
    const double mu_rad = principal_eigenvalue(2.0, radial_density(M), c.L).mu;
    const double mu_model = model_eigenvalue(2.0, c.N, c.kappa, c.lambda, c.L).mu;
    const double mu = rel(mu_rad, mu_model);
    for (const auto* r : {&hk, &bg, &vg}) {
      o.require(r->status == CheckStatus::Pass, r->check_name + " status");
      worst = std::max(worst, std::abs(r->conclusion_margin));
    }
    worst = std::max({worst, ric, theta, hf, mu});
  }
  o.require(worst <= 1e-8, "equalities");
  o.detail << " 4 models, max deviation " << worst;
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto samples = admissible_perturbations(6, 50);
  double worst = INFINITY;
  int passed = 0;
  for (const auto& s : samples) {
    const auto& p = s.spec.params;
    const auto reports = {check_theta_comparison(s.manifold, p.N, p.kappa, p.lambda),
                          check_heintze_karcher(s.manifold, p.N, p.kappa, p.lambda),
                          check_bishop_gromov(s.manifold, p.N, p.kappa, p.lambda),
                          check_eigenvalue_bound(s.manifold, 2.0, p.N, p.kappa, p.lambda)};
    for (const auto& r : reports) {
      passed += r.status == CheckStatus::Pass;
      worst = std::min(worst, r.conclusion_margin);
    }
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.require(samples.size() == 50, "sample count");
  o.require(passed == 200, "all checks pass");
  o.require(worst >= -1e-8, "conclusion margins");
  o.require(seconds < 300.0, "runtime");
  o.detail << " " << passed << "/200 pass, min margin " << worst << ", " << seconds << " s";
  return o;
}

Outcome criterion7() {
  Outcome o;
  struct Regime {
    double kappa, lambda;
  };
  double kasue_gap = INFINITY, strict_gap = INFINITY;
  for (double N : {2.0, 3.0, 5.0}) {
    // ball, model and neither regimes
    for (const Regime& g : {Regime{0.0, 1.0}, Regime{-1.0, 0.5}, Regime{-1.0, 1.0}}) {
      const double scale = std::min(1.0, truncation_radius(g.kappa, g.lambda) / 2.0);
      for (double D : {scale * 0.5, scale, scale * 2.0}) {
        const double mu = model_eigenvalue(2.0, N, g.kappa, g.lambda, D).mu;
        const double C = kasue_constant(N, g.kappa, g.lambda, D);
        const double computable = kasue_computable_bound(N, g.kappa, g.lambda, D);
        kasue_gap = std::min(kasue_gap, (mu - std::pow(2.0 * C, -2.0)) / mu);
        strict_gap = std::min(strict_gap, (mu - computable) / mu);
      }
    }
  }
  o.require(kasue_gap >= 0.0, "mu >= (2C)^-2");
  o.require(strict_gap > 0.0, "strict computable bound");

  double limit_err = 0.0;
  for (double p : {2.0, 3.0}) {
    for (double N : {2.0, 4.0}) {
      for (double lambda : {0.5, 1.0}) {
        const double C = kasue_constant(N, -lambda * lambda, lambda, 40.0);
        limit_err = std::max(limit_err, rel(std::pow(p * C, -p), std::pow((N - 1) * lambda / p, p)));
      }
    }
  }
  const auto check = check_spectrum_limit(2.0, 2.0, 1.0);
  o.require(limit_err <= 1e-6, "spectrum limit");
  o.require(check.status == CheckStatus::Pass, "spectrum_limit check");
  o.detail << " min rel gaps " << kasue_gap << " / " << strict_gap << ", limit err " << limit_err;
  return o;
}

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(COLLAR_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

bool schema_valid(const std::string& text) {
  rapidjson::Document doc;
  doc.Parse(text.c_str());
  if (doc.HasParseError() || !doc.IsArray() || doc.Empty()) return false;
  for (const auto& r : doc.GetArray()) {
    if (!r.IsObject() || r.MemberCount() != 12) return false;
    for (const char* key : {"check", "manifold", "status", "pass", "hypothesis_margin", "conclusion_margin",
                            "tolerance", "gate_tolerance", "samples", "params", "notes", "seed"}) {
      if (!r.HasMember(key)) return false;
    }
    const std::string status = r["status"].IsString() ? r["status"].GetString() : "";
    if (status != "pass" && status != "fail" && status != "not-applicable") return false;
    if (!r["check"].IsString() || !r["pass"].IsBool() || r["pass"].GetBool() != (status == "pass")) return false;
    if (!(r["manifold"].IsString() || r["manifold"].IsNull())) return false;
    for (const char* key : {"hypothesis_margin", "conclusion_margin"}) {
      if (!(r[key].IsNumber() || r[key].IsNull())) return false;
    }
    if (!r["tolerance"].IsNumber() || !r["gate_tolerance"].IsNumber() || !r["samples"].IsInt()) return false;
    if (!r["params"].IsObject() || !r["notes"].IsArray()) return false;
    if (!(r["seed"].IsUint64() || r["seed"].IsNull())) return false;
  }
  return true;
}

Outcome criterion8() {
  Outcome o;
  const auto ok = run_cli("verify " COLLAR_SOURCE_DIR "/configs/default_suite.toml");
  const int tampered = run_cli("verify " COLLAR_SOURCE_DIR "/tests/data/tampered.toml").code;
  const int malformed = run_cli("verify " COLLAR_SOURCE_DIR "/tests/data/malformed.toml").code;
  o.require(ok.code == 0, "default exit code");
  o.require(schema_valid(ok.out), "default JSON schema");
  o.require(tampered == 1, "tampered exit code");
  o.require(malformed == 2, "malformed exit code");
  o.detail << " exit codes " << ok.code << "/" << tampered << "/" << malformed;
  return o;
}

}  // namespace

int main() {
  const std::array<std::pair<const char*, std::function<Outcome()>>, 8> criteria{{
      {"eigenvalue closed form", criterion1},
      {"shooting vs finite-difference oracle", criterion2},
      {"Kasue constant scan vs closed form", criterion3},
      {"cosh curvature example", criterion4},
      {"rigidity equalities", criterion5},
      {"perturbed inequality suites", criterion6},
      {"bound chain and spectrum limit", criterion7},
      {"CLI end-to-end", criterion8},
  }};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.ok;
    std::printf("criterion %zu %s: %s (%.2f s)%s\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first, seconds,
                o.detail.str().c_str());
  }
  return failures == 0 ? 0 : 1;
}
