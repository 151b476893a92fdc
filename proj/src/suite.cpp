#include "collar/suite.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <thread>

#include <rapidjson/prettywriter.h>
#include <rapidjson/stringbuffer.h>

#include "collar/error.hpp"

namespace collar {

namespace {

struct Job {
  CheckSpec spec;
  /// Index into the manifold table, -1 for parameter checks.
  int manifold = -1;
  std::string origin;  // key path for error messages
  double tolerance = 0.0;
};

double value_or(const CheckSpec& c, const char* key, double fallback) {
  const auto it = c.values.find(key);
  return it == c.values.end() ? fallback : it->second;
}

std::vector<double> spectrum_grid(double D_max) {
  if (D_max <= 0.5) return {D_max};
  std::vector<double> grid;
  for (int i = 0; i < 32; ++i) grid.push_back(0.5 * std::pow(D_max / 0.5, i / 31.0));
  grid.back() = D_max;
  return grid;
}

VerificationReport run_job(const Job& job, const SuiteConfig& config,
                           const std::vector<WarpedManifold>& manifolds) {
  CheckOptions options;
  options.grid = config.suite.grid;
  options.tol.gate = config.suite.gate_tolerance;
  options.tol.conclusion = job.tolerance;
  const CheckSpec& c = job.spec;
  const double p = value_or(c, "p", 2.0);

  if (c.name == "kasue_eigen_bounds") {
    return check_kasue_eigen_bounds(p, value_or(c, "N", 2.0), value_or(c, "kappa", 0.0),
                                    value_or(c, "lambda", 0.0), value_or(c, "D", 1.0), options);
  }
  if (c.name == "spectrum_limit") {
    std::vector<double> grid = c.D_grid;
    if (grid.empty() && c.values.count("D")) grid = spectrum_grid(c.values.at("D"));
    return check_spectrum_limit(p, value_or(c, "N", 2.0), value_or(c, "lambda", 0.0), grid,
                                options);
  }

  const ManifoldSpec& spec = config.manifolds[job.manifold];
  const WarpedManifold& M = manifolds[job.manifold];
  const double N = value_or(c, "N", spec.effective_N());
  const double kappa = value_or(c, "kappa", spec.kappa);
  const double lambda = value_or(c, "lambda", spec.lambda);
  VerificationReport r;
  if (c.name == "theta_comparison") {
    r = check_theta_comparison(M, N, kappa, lambda, options);
  } else if (c.name == "heintze_karcher") {
    r = check_heintze_karcher(M, N, kappa, lambda, c.radii, options);
  } else if (c.name == "bishop_gromov") {
    r = check_bishop_gromov(M, N, kappa, lambda, c.pairs, options);
  } else if (c.name == "inscribed_radius") {
    r = check_inscribed_radius(M, kappa, lambda, N, options);
  } else if (c.name == "eigenvalue_bound") {
    r = check_eigenvalue_bound(M, p, N, kappa, lambda, options);
  } else if (c.name == "domain_volume_estimate") {
    r = check_domain_volume_estimate(M, N, kappa, lambda, value_or(c, "a", 0.0),
                                     value_or(c, "b", 0.0), options);
  } else {
    r = check_volume_growth_equality(M, N, kappa, lambda, c.radii, options);
  }
  r.manifold = spec.name;
  if (spec.kind == "perturbed") r.seed = spec.seed;
  return r;
}

VerificationReport guarded(const Job& job, const SuiteConfig& config,
                           const std::vector<WarpedManifold>& manifolds) {
  try {
    return run_job(job, config, manifolds);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidArgument:
      case ErrorCode::OutOfRange:
      case ErrorCode::DimensionMismatch:
        throw Error(ErrorCode::ConfigSemantic, job.origin + ": " + e.what());
      default:
        break;
    }
    // Numerical breakdown is a failed check, not a config problem.
    VerificationReport r;
    r.check_name = job.spec.name;
    if (job.manifold >= 0) r.manifold = config.manifolds[job.manifold].name;
    r.hypothesis_margin = std::numeric_limits<double>::quiet_NaN();
    r.conclusion_margin = std::numeric_limits<double>::quiet_NaN();
    r.status = CheckStatus::Fail;
    r.tolerance = job.tolerance;
    r.gate_tolerance = config.suite.gate_tolerance;
    r.notes.push_back(std::string(to_string(e.code())) + ": " + e.what());
    return r;
  }
}

std::vector<Job> expand(const SuiteConfig& config) {
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < config.checks.size(); ++i) {
    const CheckSpec& c = config.checks[i];
    Job job{c, -1, "check[" + std::to_string(i) + "]", c.tolerance.value_or(config.suite.tolerance)};
    if (!c.manifold.empty()) {
      for (std::size_t k = 0; k < config.manifolds.size(); ++k) {
        if (config.manifolds[k].name == c.manifold) job.manifold = static_cast<int>(k);
      }
      if (job.manifold < 0) {
        throw Error(ErrorCode::ConfigSemantic, job.origin + ".manifold: undefined manifold");
      }
    }
    jobs.push_back(std::move(job));
  }
  if (!config.sweep) return jobs;
  const SweepSpec& w = *config.sweep;
  const double tol = w.tolerance.value_or(config.suite.tolerance);
  for (const std::string& name : w.checks) {
    const bool spectrum = name == "spectrum_limit";
    const std::vector<double> kappas = spectrum ? std::vector<double>{0.0} : w.kappa;
    for (double p : w.p) {
      for (double N : w.N) {
        for (double kappa : kappas) {
          for (double lambda : w.lambda) {
            for (double D : w.D) {
              CheckSpec c;
              c.name = name;
              c.values = {{"p", p}, {"N", N}, {"lambda", lambda}, {"D", D}};
              if (!spectrum) c.values["kappa"] = kappa;
              jobs.push_back({std::move(c), -1, "sweep", tol});
            }
          }
        }
      }
    }
  }
  return jobs;
}

std::string number_text(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class Writer>
void write_number(Writer& out, double x) {
  if (!std::isfinite(x)) {
    out.Null();
    return;
  }
  const std::string text = number_text(x);
  out.RawValue(text.c_str(), text.size(), rapidjson::kNumberType);
}

}  // namespace

std::string format_number(double x) { return number_text(x); }

std::vector<VerificationReport> run_suite(const SuiteConfig& config, int threads) {
  std::vector<WarpedManifold> manifolds;
  manifolds.reserve(config.manifolds.size());
  for (const ManifoldSpec& m : config.manifolds) manifolds.push_back(build_manifold(m));

  const std::vector<Job> jobs = expand(config);
  std::vector<VerificationReport> reports(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  if (threads <= 0) threads = config.suite.threads;
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  threads = std::min<int>(threads, static_cast<int>(jobs.size()));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        reports[i] = guarded(jobs[i], config, manifolds);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return reports;
}

bool suite_passed(const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail) return false;
  }
  return true;
}

std::string reports_to_json(const std::vector<VerificationReport>& reports) {
  rapidjson::StringBuffer buffer;
  rapidjson::PrettyWriter<rapidjson::StringBuffer> out(buffer);
  out.SetIndent(' ', 2);
  out.StartArray();
  for (const VerificationReport& r : reports) {
    out.StartObject();
    out.Key("check");
    out.String(r.check_name.c_str());
    out.Key("manifold");
    if (r.manifold.empty()) {
      out.Null();
    } else {
      out.String(r.manifold.c_str());
    }
    out.Key("status");
    out.String(to_string(r.status));
    out.Key("pass");
    out.Bool(r.pass);
    out.Key("hypothesis_margin");
    write_number(out, r.hypothesis_margin);
    out.Key("conclusion_margin");
    write_number(out, r.conclusion_margin);
    out.Key("tolerance");
    write_number(out, r.tolerance);
    out.Key("gate_tolerance");
    write_number(out, r.gate_tolerance);
    out.Key("samples");
    out.Int(r.samples);
    out.Key("params");
    out.StartObject();
    for (const auto& [key, value] : r.params) {
      out.Key(key.c_str());
      if (std::isinf(value)) {
        out.String(value > 0 ? "inf" : "-inf");
      } else {
        write_number(out, value);
      }
    }
    out.EndObject();
    out.Key("notes");
    out.StartArray();
    for (const auto& note : r.notes) out.String(note.c_str());
    out.EndArray();
    out.Key("seed");
    if (r.seed) {
      out.Uint64(*r.seed);
    } else {
      out.Null();
    }
    out.EndObject();
  }
  out.EndArray();
  return std::string(buffer.GetString(), buffer.GetSize()) + "\n";
}

std::string reports_to_csv(const std::vector<VerificationReport>& reports) {
  static const char* columns[] = {"p", "n", "N", "kappa", "lambda", "L", "D", "a", "b"};
  std::string out = "check,manifold";
  for (const char* c : columns) out += std::string(",") + c;
  out += ",hypothesis_margin,conclusion_margin,pass\n";
  for (const VerificationReport& r : reports) {
    out += r.check_name + "," + r.manifold;
    for (const char* c : columns) {
      out += ",";
      for (const auto& [key, value] : r.params) {
        if (key == c) out += number_text(value);
      }
    }
    out += "," + number_text(r.hypothesis_margin) + "," + number_text(r.conclusion_margin) + ",";
    out += r.status == CheckStatus::NotApplicable ? "na" : (r.pass ? "true" : "false");
    out += "\n";
  }
  return out;
}

}  // namespace collar
