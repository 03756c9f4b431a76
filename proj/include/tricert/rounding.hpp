#pragma once

#include "tricert/bigfloat.hpp"

#include <cmath>
#include <limits>

namespace tricert {

/// Directed-rounding primitives for an endpoint type. Every *_down result is
/// <= the exact result and every *_up result is >= it.
template <typename T>
struct Rounding;

/// IEEE double in round-to-nearest. The sign of the exact rounding error is
/// recovered with error-free transformations (TwoSum, FMA residuals), so a
/// result is only nudged one ulp when it actually was inexact.
template <>
struct Rounding<double> {
  static constexpr double inf = std::numeric_limits<double>::infinity();
  // Below this magnitude FMA residuals may be inexact (subnormal range).
  static constexpr double tiny = 0x1p-960;

  static double down(double x) { return std::nextafter(x, -inf); }
  static double up(double x) { return std::nextafter(x, inf); }

  static double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return std::isnan(s) ? s : (s > 0 && std::isfinite(a) && std::isfinite(b) ? std::numeric_limits<double>::max() : s);
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err < 0 ? down(s) : s;
  }
  static double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return std::isnan(s) ? s : (s < 0 && std::isfinite(a) && std::isfinite(b) ? -std::numeric_limits<double>::max() : s);
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? up(s) : s;
  }
  static double sub_down(double a, double b) { return add_down(a, -b); }
  static double sub_up(double a, double b) { return add_up(a, -b); }

  static double mul_down(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::fabs(p) < tiny) return (p == 0 && (a == 0 || b == 0)) ? p : down(p);
    return std::fma(a, b, -p) < 0 ? down(p) : p;
  }
  static double mul_up(double a, double b) {
    const double p = a * b;
    if (!std::isfinite(p)) return p;
    if (std::fabs(p) < tiny) return (p == 0 && (a == 0 || b == 0)) ? p : up(p);
    return std::fma(a, b, -p) > 0 ? up(p) : p;
  }

  static double div_down(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < tiny || std::fabs(a) < tiny) return (a == 0) ? q : down(q);
    const double r = std::fma(-q, b, a);  // a - q*b, exact
    const double err = (b > 0) ? r : -r;
    return err < 0 ? down(q) : q;
  }
  static double div_up(double a, double b) {
    const double q = a / b;
    if (!std::isfinite(q)) return q;
    if (std::fabs(q) < tiny || std::fabs(a) < tiny) return (a == 0) ? q : up(q);
    const double r = std::fma(-q, b, a);
    const double err = (b > 0) ? r : -r;
    return err > 0 ? up(q) : q;
  }

  static double sqrt_down(double a) {
    if (a <= 0) return a == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    const double r = std::sqrt(a);
    if (a < tiny) return down(r);
    return std::fma(-r, r, a) < 0 ? down(r) : r;
  }
  static double sqrt_up(double a) {
    if (a <= 0) return a == 0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
    const double r = std::sqrt(a);
    if (a < tiny) return up(r);
    return std::fma(-r, r, a) > 0 ? up(r) : r;
  }

  static double from_double_down(double v) { return v; }
  static double from_double_up(double v) { return v; }
  static double to_double_down(double v) { return v; }
  static double to_double_up(double v) { return v; }
  static double from_big_down(const BigFloat& v) { return v.to_double(MPFR_RNDD); }
  static double from_big_up(const BigFloat& v) { return v.to_double(MPFR_RNDU); }
  static BigFloat to_big_down(double v) { return BigFloat(v, MPFR_RNDD); }
  static BigFloat to_big_up(double v) { return BigFloat(v, MPFR_RNDU); }
  static double ldexp(double v, int e) { return std::ldexp(v, e); }
  static bool is_nan(double v) { return std::isnan(v); }
  static int precision_bits() { return 53; }
};

template <>
struct Rounding<BigFloat> {
  using T = BigFloat;
  static T add_down(const T& a, const T& b) { T r; mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDD); return r; }
  static T add_up(const T& a, const T& b) { T r; mpfr_add(r.get(), a.get(), b.get(), MPFR_RNDU); return r; }
  static T sub_down(const T& a, const T& b) { T r; mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDD); return r; }
  static T sub_up(const T& a, const T& b) { T r; mpfr_sub(r.get(), a.get(), b.get(), MPFR_RNDU); return r; }
  static T mul_down(const T& a, const T& b) { T r; mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDD); return r; }
  static T mul_up(const T& a, const T& b) { T r; mpfr_mul(r.get(), a.get(), b.get(), MPFR_RNDU); return r; }
  static T div_down(const T& a, const T& b) { T r; mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDD); return r; }
  static T div_up(const T& a, const T& b) { T r; mpfr_div(r.get(), a.get(), b.get(), MPFR_RNDU); return r; }
  static T sqrt_down(const T& a) { T r; mpfr_sqrt(r.get(), a.get(), MPFR_RNDD); return r; }
  static T sqrt_up(const T& a) { T r; mpfr_sqrt(r.get(), a.get(), MPFR_RNDU); return r; }

  static T from_double_down(double v) { return T(v, MPFR_RNDD); }
  static T from_double_up(double v) { return T(v, MPFR_RNDU); }
  static double to_double_down(const T& v) { return v.to_double(MPFR_RNDD); }
  static double to_double_up(const T& v) { return v.to_double(MPFR_RNDU); }
  static T from_big_down(const BigFloat& v) { T r; mpfr_set(r.get(), v.get(), MPFR_RNDD); return r; }
  static T from_big_up(const BigFloat& v) { T r; mpfr_set(r.get(), v.get(), MPFR_RNDU); return r; }
  static BigFloat to_big_down(const T& v) { return v; }
  static BigFloat to_big_up(const T& v) { return v; }
  static T ldexp(const T& v, int e) { T r; mpfr_mul_2si(r.get(), v.get(), e, MPFR_RNDN); return r; }
  static bool is_nan(const T& v) { return v.is_nan(); }
  static int precision_bits() { return static_cast<int>(BigFloat::default_precision()); }
};

} // namespace tricert
