#pragma once

// 2x2 real matrices, Moebius fixed points, and a small directed-rounding
// interval type used as the certified fallback for crossing predicates.

#include <cmath>
#include <limits>

#include "orbitcount/errors.hpp"

namespace orbitcount {

struct Mat2 {
  double a = 1, b = 0, c = 0, d = 1;

  static Mat2 identity() { return {}; }
  double trace() const { return a + d; }
  double det() const { return a * d - b * c; }
  Mat2 inverse() const {
    double dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  double max_abs() const { return std::max(std::max(std::fabs(a), std::fabs(b)), std::max(std::fabs(c), std::fabs(d))); }
  Mat2 scaled(double s) const { return {a * s, b * s, c * s, d * s}; }

  // Moebius action on the boundary R union {inf}.
  double apply_boundary(double x) const {
    if (std::isinf(x)) return (c != 0) ? a / c : std::numeric_limits<double>::infinity();
    double num = a * x + b, den = c * x + d;
    if (den == 0) return std::numeric_limits<double>::infinity();
    return num / den;
  }
};

// Product with running rescaling so long words do not overflow.
struct ScaledMat2 {
  Mat2 m;
  double log_scale = 0;

  void absorb() {
    double s = m.max_abs();
    if (s > 1e12 || (s > 0 && s < 1e-12)) {
      m = m.scaled(1.0 / s);
      log_scale += std::log(s);
    }
  }
  friend ScaledMat2 operator*(const ScaledMat2& x, const ScaledMat2& y) {
    ScaledMat2 out{x.m * y.m, x.log_scale + y.log_scale};
    out.absorb();
    return out;
  }
  // |trace| in log form: returns log(|tr|); -inf when the trace vanishes.
  double log_abs_trace() const {
    double t = std::fabs(m.trace());
    return t == 0 ? -std::numeric_limits<double>::infinity() : std::log(t) + log_scale;
  }
  double abs_trace() const { return std::fabs(m.trace()) * std::exp(log_scale); }
};

// translation length of a hyperbolic element from log|trace|
inline double length_from_log_trace(double log_abs_tr) {
  // 2*acosh(t/2) with t = exp(log_abs_tr), stable for huge t
  if (log_abs_tr > 40) {
    // acosh(t/2) = log(t) + log(1/2 + sqrt(1/4 - 1/t^2)) -> log(t)
    return 2.0 * log_abs_tr;
  }
  double t = std::exp(log_abs_tr);
  if (t <= 2.0) return 0.0;
  return 2.0 * std::acosh(t / 2.0);
}

inline double sign_of(double x) { return x < 0 ? -1.0 : 1.0; }

// Closed interval with outward rounding by ulp nudges.  Not a full interval
// package, just enough to certify sign decisions away from zero.
struct Interval {
  double lo = 0, hi = 0;

  static Interval exact(double x) { return {x, x}; }
  static double down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
  static double up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

  friend Interval operator+(const Interval& x, const Interval& y) { return {down(x.lo + y.lo), up(x.hi + y.hi)}; }
  friend Interval operator-(const Interval& x, const Interval& y) { return {down(x.lo - y.hi), up(x.hi - y.lo)}; }
  friend Interval operator*(const Interval& x, const Interval& y) {
    double c1 = x.lo * y.lo, c2 = x.lo * y.hi, c3 = x.hi * y.lo, c4 = x.hi * y.hi;
    return {down(std::min(std::min(c1, c2), std::min(c3, c4))), up(std::max(std::max(c1, c2), std::max(c3, c4)))};
  }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  int certified_sign() const {
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    throw needs_exact_error("interval sign undetermined");
  }
};

inline Interval sqrt_interval(const Interval& x) {
  if (x.lo < 0) throw needs_exact_error("interval sqrt of possibly-negative value");
  return {Interval::down(std::sqrt(x.lo)), Interval::up(std::sqrt(x.hi))};
}

}  // namespace orbitcount
