#pragma once

#include <cmath>

namespace collar {

/// Second-order forward-mode scalar: value plus first and second derivative
/// with respect to a single variable. Profiles are evaluated on jets so that
/// curvature formulas get exact w', w'', f', f'' for closed-form inputs.
struct Jet {
  double v = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  constexpr Jet() = default;
  constexpr Jet(double value) : v(value) {}  // NOLINT: implicit constant lift
  constexpr Jet(double value, double first, double second)
      : v(value), d1(first), d2(second) {}

  static constexpr Jet variable(double t) { return {t, 1.0, 0.0}; }
};

inline Jet operator+(const Jet& a, const Jet& b) {
  return {a.v + b.v, a.d1 + b.d1, a.d2 + b.d2};
}
inline Jet operator-(const Jet& a, const Jet& b) {
  return {a.v - b.v, a.d1 - b.d1, a.d2 - b.d2};
}
inline Jet operator-(const Jet& a) { return {-a.v, -a.d1, -a.d2}; }
inline Jet operator*(const Jet& a, const Jet& b) {
  return {a.v * b.v, a.d1 * b.v + a.v * b.d1,
          a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2};
}

// Chain rule for a scalar function g applied to a jet, given g, g', g'' at a.v.
inline Jet compose(const Jet& a, double g0, double g1, double g2) {
  return {g0, g1 * a.d1, g2 * a.d1 * a.d1 + g1 * a.d2};
}

inline Jet reciprocal(const Jet& a) {
  const double r = 1.0 / a.v;
  return compose(a, r, -r * r, 2.0 * r * r * r);
}
inline Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

inline Jet& operator+=(Jet& a, const Jet& b) { return a = a + b; }
inline Jet& operator-=(Jet& a, const Jet& b) { return a = a - b; }
inline Jet& operator*=(Jet& a, const Jet& b) { return a = a * b; }

inline Jet exp(const Jet& a) {
  const double e = std::exp(a.v);
  return compose(a, e, e, e);
}
inline Jet log(const Jet& a) {
  const double r = 1.0 / a.v;
  return compose(a, std::log(a.v), r, -r * r);
}
inline Jet sin(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, s, c, -s);
}
inline Jet cos(const Jet& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  return compose(a, c, -s, -c);
}
inline Jet sinh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, s, c, s);
}
inline Jet cosh(const Jet& a) {
  const double s = std::sinh(a.v), c = std::cosh(a.v);
  return compose(a, c, s, c);
}

// a^b. A constant exponent uses the power rule so negative bases with
// integral exponents stay defined; otherwise exp(b log a).
inline Jet pow(const Jet& a, const Jet& b) {
  if (b.d1 == 0.0 && b.d2 == 0.0) {
    const double e = b.v;
    if (e == 0.0) return Jet(1.0);
    const double g0 = std::pow(a.v, e);
    const double g1 = e == 1.0 ? 1.0 : e * std::pow(a.v, e - 1.0);
    const double g2 =
        (e == 1.0) ? 0.0 : (e == 2.0 ? 2.0 : e * (e - 1.0) * std::pow(a.v, e - 2.0));
    return compose(a, g0, g1, g2);
  }
  return exp(b * log(a));
}

}  // namespace collar
