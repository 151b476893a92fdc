#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <rapidjson/prettywriter.h>
#include <rapidjson/stringbuffer.h>

#include "collar/config.hpp"
#include "collar/error.hpp"
#include "collar/model_space.hpp"
#include "collar/sturm_liouville.hpp"
#include "collar/suite.hpp"
#include "collar/warped_product.hpp"

namespace {

using Field = std::variant<std::optional<double>, std::string, int, bool>;

// One flat JSON object, numbers with 17 significant digits, null for
// missing or non-finite values.
void print_object(const std::vector<std::pair<std::string, Field>>& fields) {
  rapidjson::StringBuffer buffer;
  rapidjson::PrettyWriter<rapidjson::StringBuffer> out(buffer);
  out.SetIndent(' ', 2);
  out.StartObject();
  for (const auto& [key, value] : fields) {
    out.Key(key.c_str());
    if (const auto* x = std::get_if<std::optional<double>>(&value)) {
      if (!*x || !std::isfinite(**x)) {
        out.Null();
      } else {
        const std::string text = collar::format_number(**x);
        out.RawValue(text.c_str(), text.size(), rapidjson::kNumberType);
      }
    } else if (const auto* s = std::get_if<std::string>(&value)) {
      out.String(s->c_str());
    } else if (const int* i = std::get_if<int>(&value)) {
      out.Int(*i);
    } else {
      out.Bool(std::get<bool>(value));
    }
  }
  out.EndObject();
  std::cout << buffer.GetString() << "\n";
}

double parse_dimension(const std::string& text) {
  if (text == "inf" || text == "+inf") return collar::kInfiniteDimension;
  std::size_t used = 0;
  const double x = std::stod(text, &used);
  if (used != text.size()) throw CLI::ValidationError("N", "expected a number or 'inf'");
  return x;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  return static_cast<bool>(out);
}

int worker_count(const collar::SuiteConfig& config) {
  int threads = config.suite.threads > 0
                    ? config.suite.threads
                    : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  if (const char* cap = std::getenv("COLLAR_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(cap, &end, 10);
    if (end != cap && *end == '\0' && value > 0) threads = std::min<long>(threads, value);
  }
  return threads;
}

struct ModelArgs {
  double kappa = 0.0;
  double lambda = 0.0;
  std::optional<double> N;
  std::optional<double> r;
  std::optional<double> D;
};

int cmd_model(const ModelArgs& a) {
  using namespace collar;
  if (a.N && !(*a.N >= 2.0)) {
    std::cerr << "error: --N must be >= 2\n";
    return 2;
  }
  const ModelCritical critical = model_critical(a.kappa, a.lambda);
  std::optional<double> s_N;
  std::optional<double> kasue;
  if (a.N && a.r) {
    if (!(*a.r >= 0.0)) {
      std::cerr << "error: --r must be >= 0\n";
      return 2;
    }
    s_N = collar_model_volume(*a.N, a.kappa, a.lambda, *a.r);
  }
  if (a.N && a.D) {
    if (!(*a.D > 0.0)) {
      std::cerr << "error: --D must be > 0\n";
      return 2;
    }
    try {
      kasue = kasue_constant(*a.N, a.kappa, a.lambda, *a.D);
    } catch (const Error& e) {
      std::cerr << "note: kasue_at_D undefined: " << e.what() << "\n";
    }
  }
  if (critical.degenerate_flat) std::cerr << "note: kappa = lambda = 0, d_model is the inscribed radius\n";
  print_object({
      {"class", std::string(to_string(classify(a.kappa, a.lambda)))},
      {"c_ball", ball_radius(a.kappa, a.lambda)},
      {"d_model", critical.radius},
      {"s_N_at_r", s_N},
      {"kasue_at_D", kasue},
  });
  return 0;
}

struct EigenArgs {
  double p = 2.0;
  bool free = false;
  std::optional<std::string> N;
  double kappa = 0.0;
  double lambda = 0.0;
  double D = 1.0;
};

int cmd_eigen(const EigenArgs& a) {
  using namespace collar;
  if (!(a.p > 1.0)) {
    std::cerr << "error: p out of range, need p > 1\n";
    return 2;
  }
  if (!(a.D > 0.0) || !std::isfinite(a.D)) {
    std::cerr << "error: --D must be positive\n";
    return 2;
  }
  if (!a.free && !a.N) {
    std::cerr << "error: give --free or --N\n";
    return 2;
  }
  const double N = a.free ? kInfiniteDimension : parse_dimension(*a.N);
  if (!a.free && (a.D > truncation_radius(a.kappa, a.lambda) * (1.0 + 1e-12))) {
    std::cerr << "error: D exceeds C_bar(kappa, lambda)\n";
    return 2;
  }
  if (is_infinite_dimension(N) && (a.kappa != 0.0 || a.lambda != 0.0)) {
    std::cerr << "error: N = inf needs kappa = lambda = 0\n";
    return 2;
  }
  const EigenResult r =
      is_infinite_dimension(N) ? free_eigenvalue(a.p, a.D) : model_eigenvalue(a.p, N, a.kappa, a.lambda, a.D);
  print_object({
      {"mu", r.mu},
      {"residual", r.endpoint_residual},
      {"iterations", r.iterations},
      {"degenerate_endpoint", r.degenerate_endpoint},
  });
  return 0;
}

struct CurvatureArgs {
  std::string config;
  std::string manifold;
  int n = 3;
  double L = 1.0;
  std::string w;
  std::string f = "0";
  std::optional<std::string> N;
  std::optional<double> kappa;
  std::optional<double> lambda;
  double fiber_kappa = 1.0;
  bool second_boundary = false;
  int grid = 1024;
};

int cmd_curvature(const CurvatureArgs& a) {
  using namespace collar;
  ManifoldSpec spec;
  if (!a.config.empty()) {
    const SuiteConfig config = load_config(a.config);
    const ManifoldSpec* found = config.find_manifold(a.manifold);
    if (!found) {
      std::cerr << "error: no manifold '" << a.manifold << "' in " << a.config << "\n";
      return 2;
    }
    spec = *found;
  } else {
    if (a.w.empty()) {
      std::cerr << "error: give --w (or --config and --manifold)\n";
      return 2;
    }
    spec.name = "inline";
    spec.kind = "custom";
    spec.n = a.n;
    spec.L = a.L;
    spec.w = a.w;
    spec.f = a.f;
    spec.fiber_kappa = a.fiber_kappa;
    spec.second_boundary = a.second_boundary;
  }
  double N = spec.effective_N();
  if (a.N) N = parse_dimension(*a.N);
  const WarpedManifold M = build_manifold(spec);
  const double kappa = a.kappa.value_or(spec.kappa);
  const double lambda = a.lambda.value_or(spec.lambda);
  const CurvatureReport report = curvature_margin(M, N, kappa, a.grid);
  const double gate = hypothesis_margin(report, N, lambda);
  print_object({
      {"manifold", spec.name},
      {"grid", a.grid},
      {"ricci_bound", ricci_bound(N, kappa)},
      {"min_radial", report.radial_samples.minCoeff()},
      {"min_fiber", report.fiber_samples.minCoeff()},
      {"margin", report.margin},
      {"h_f_0", report.h_f_0},
      {"h_f_L", report.h_f_L},
      {"hypothesis_margin", gate},
      {"gate", gate >= -1e-9},
  });
  return 0;
}

struct VerifyArgs {
  std::string config;
  std::string json;
  std::string csv;
};

int cmd_verify(const VerifyArgs& a) {
  using namespace collar;
  const SuiteConfig config = load_config(a.config);
  const std::vector<VerificationReport> reports = run_suite(config, worker_count(config));
  const std::string json_path = a.json.empty() ? config.output.json : a.json;
  const std::string csv_path = a.csv.empty() ? config.output.csv : a.csv;
  const std::string json = reports_to_json(reports);
  if (json_path.empty()) {
    std::cout << json;
  } else if (!write_file(json_path, json)) {
    std::cerr << "error: cannot write " << json_path << "\n";
    return 2;
  }
  if (!csv_path.empty() && !write_file(csv_path, reports_to_csv(reports))) {
    std::cerr << "error: cannot write " << csv_path << "\n";
    return 2;
  }
  int pass = 0, fail = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Pass) ++pass;
    if (r.status == CheckStatus::Fail) ++fail;
    if (r.status == CheckStatus::NotApplicable) ++skipped;
    if (r.status == CheckStatus::Fail) {
      std::cerr << "FAIL " << r.check_name << (r.manifold.empty() ? "" : " on " + r.manifold)
                << ": conclusion_margin " << format_number(r.conclusion_margin) << "\n";
    }
  }
  std::cerr << reports.size() << " checks: " << pass << " pass, " << fail << " fail, " << skipped
            << " not-applicable\n";
  return suite_passed(reports) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparison geometry checks for weighted manifolds with boundary"};
  app.require_subcommand(1);

  ModelArgs model;
  auto* model_cmd = app.add_subcommand("model", "Classify (kappa, lambda) and print model constants");
  model_cmd->add_option("--kappa", model.kappa)->required();
  model_cmd->add_option("--lambda", model.lambda)->required();
  model_cmd->add_option("--N", model.N, "effective dimension for s_N and the Kasue constant");
  model_cmd->add_option("--r", model.r, "radius for s_N");
  model_cmd->add_option("--D", model.D, "length for the Kasue constant");

  EigenArgs eigen;
  auto* eigen_cmd = app.add_subcommand("eigen", "Principal Dirichlet-Neumann p-eigenvalue of a model");
  eigen_cmd->add_option("--p", eigen.p)->required();
  auto* free_flag = eigen_cmd->add_flag("--free", eigen.free, "N = inf family (constant density)");
  eigen_cmd->add_option("--N", eigen.N)->excludes(free_flag);
  eigen_cmd->add_option("--kappa", eigen.kappa);
  eigen_cmd->add_option("--lambda", eigen.lambda);
  eigen_cmd->add_option("--D", eigen.D)->required();

  CurvatureArgs curv;
  auto* curv_cmd = app.add_subcommand("curvature", "Sample Ric^N_f and H_f on a warped product");
  auto* config_opt = curv_cmd->add_option("--config", curv.config)->check(CLI::ExistingFile);
  curv_cmd->add_option("--manifold", curv.manifold)->needs(config_opt);
  curv_cmd->add_option("--n", curv.n);
  curv_cmd->add_option("--L", curv.L);
  curv_cmd->add_option("--w", curv.w, "warping function of t");
  curv_cmd->add_option("--f", curv.f, "weight function of t");
  curv_cmd->add_option("--N", curv.N);
  curv_cmd->add_option("--kappa", curv.kappa);
  curv_cmd->add_option("--lambda", curv.lambda);
  curv_cmd->add_option("--fiber-kappa", curv.fiber_kappa);
  curv_cmd->add_flag("--second-boundary", curv.second_boundary);
  curv_cmd->add_option("--grid", curv.grid)->check(CLI::Range(64, 1 << 24));

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("config", verify.config)->required();
  verify_cmd->add_option("--json", verify.json, "write the JSON report here instead of stdout");
  verify_cmd->add_option("--csv", verify.csv, "also write a CSV table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*model_cmd) return cmd_model(model);
    if (*eigen_cmd) return cmd_eigen(eigen);
    if (*curv_cmd) return cmd_curvature(curv);
    return cmd_verify(verify);
  } catch (const collar::Error& e) {
    std::cerr << "error (" << collar::to_string(e.code()) << "): " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
