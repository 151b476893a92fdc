#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "collar/jet.hpp"

namespace collar {

/// A radial function of t with two derivatives, evaluated as a Jet.
///
/// Closed forms and expressions are differentiated exactly (forward mode).
/// Sampled tables take node derivatives from 5-point stencils and
/// interpolate between nodes with cubic Hermite (value), cubic Hermite on
/// (f', f'') (first derivative) and linear (second derivative).
class Profile {
 public:
  Profile() : Profile(constant(0.0)) {}

  static Profile constant(double c);
  static Profile closed_form(std::function<Jet(const Jet&)> fn, std::string label);
  static Profile expression(std::string_view text);
  /// Uniform samples on [t0, t1]; at least 5 values.
  static Profile sampled(double t0, double t1, std::vector<double> values);
  /// s_{kappa,lambda}.
  static Profile jacobi(double kappa, double lambda);
  /// f0 - coefficient * log s_{kappa,lambda}.
  static Profile log_jacobi(double f0, double coefficient, double kappa, double lambda);

  Jet operator()(double t) const { return fn_(t); }
  double value(double t) const { return fn_(t).v; }

  bool is_constant() const { return constant_; }
  bool is_sampled() const { return sampled_; }
  /// Domain of a sampled table; [-inf, inf] otherwise.
  double domain_begin() const { return begin_; }
  double domain_end() const { return end_; }
  const std::string& label() const { return label_; }

 private:
  Profile(std::function<Jet(double)> fn, std::string label, bool constant, bool sampled,
          double begin, double end);

  std::function<Jet(double)> fn_;
  std::string label_;
  bool constant_ = false;
  bool sampled_ = false;
  double begin_;
  double end_;
};

}  // namespace collar
