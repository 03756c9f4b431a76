#pragma once

#include "tricert/bigfloat.hpp"
#include "tricert/errors.hpp"
#include "tricert/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <type_traits>

namespace tricert {

/// Closed interval [lo, hi] with outward-rounded endpoints of type T
/// (double or BigFloat). Every operation returns an enclosure of all
/// pointwise results over its operands.
template <typename T>
class Interval {
public:
  using Scalar = T;
  using R = Rounding<T>;

  Interval() : lo_(0.0), hi_(0.0) {}
  Interval(double v) : lo_(R::from_double_down(v)), hi_(R::from_double_up(v)) {}
  Interval(int v) : Interval(static_cast<double>(v)) {}
  Interval(T lo, T hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (hi_ < lo_) fail(ErrorCode::domain, "interval with lo > hi");
  }

  static Interval hull_of(double a, double b) {
    return Interval(R::from_double_down(std::min(a, b)), R::from_double_up(std::max(a, b)));
  }
  static Interval entire() {
    return Interval(R::from_double_down(-std::numeric_limits<double>::infinity()),
                    R::from_double_up(std::numeric_limits<double>::infinity()));
  }
  /// Smallest representable interval containing the decimal number `text`.
  static Interval from_decimal(const std::string& text);
  static Interval from_decimal(const std::string& lo, const std::string& hi);
  /// Outward conversion from another endpoint type.
  template <typename U>
  static Interval from(const Interval<U>& x);

  const T& lo() const { return lo_; }
  const T& hi() const { return hi_; }
  double lo_d() const { return R::to_double_down(lo_); }
  double hi_d() const { return R::to_double_up(hi_); }
  /// Approximate midpoint (round to nearest); always inside the interval.
  T mid() const;
  double mid_d() const;
  /// Upper bound of the radius about mid().
  T rad() const;
  double rad_d() const;
  /// Upper bound of hi - lo.
  T width() const { return R::sub_up(hi_, lo_); }
  double width_d() const { return R::to_double_up(width()); }

  bool is_point() const { return lo_ == hi_; }
  bool contains(double v) const { return lo_ <= T(v) && T(v) <= hi_; }
  bool contains(const T& v) const requires(!std::is_same_v<T, double>) { return lo_ <= v && v <= hi_; }
  bool contains(const Interval& x) const { return lo_ <= x.lo_ && x.hi_ <= hi_; }
  bool contains_zero() const { return lo_ <= T(0.0) && T(0.0) <= hi_; }
  bool certainly_positive() const { return lo_ > T(0.0); }
  bool certainly_negative() const { return hi_ < T(0.0); }
  bool certainly_nonnegative() const { return lo_ >= T(0.0); }
  /// +1 / -1 when the sign is certified, 0 otherwise.
  int certified_sign() const { return certainly_positive() ? 1 : (certainly_negative() ? -1 : 0); }
  bool certainly_less(const Interval& y) const { return hi_ < y.lo_; }
  bool certainly_greater(const Interval& y) const { return lo_ > y.hi_; }
  bool overlaps(const Interval& y) const { return !(hi_ < y.lo_ || y.hi_ < lo_); }
  bool is_finite() const;

  Interval operator-() const { return Interval(neg(hi_), neg(lo_)); }
  Interval& operator+=(const Interval& y) { return *this = *this + y; }
  Interval& operator-=(const Interval& y) { return *this = *this - y; }
  Interval& operator*=(const Interval& y) { return *this = *this * y; }
  Interval& operator/=(const Interval& y) { return *this = *this / y; }

  friend Interval operator+(const Interval& a, const Interval& b) {
    return Interval(R::add_down(a.lo_, b.lo_), R::add_up(a.hi_, b.hi_), unchecked{});
  }
  friend Interval operator-(const Interval& a, const Interval& b) {
    return Interval(R::sub_down(a.lo_, b.hi_), R::sub_up(a.hi_, b.lo_), unchecked{});
  }
  friend Interval operator*(const Interval& a, const Interval& b) { return multiply(a, b); }
  friend Interval operator/(const Interval& a, const Interval& b) { return divide(a, b); }

  std::string to_string(int digits = 17) const;

  static T neg(const T& v) {
    if constexpr (std::is_same_v<T, double>) {
      return -v;
    } else {
      T r = v;
      mpfr_neg(r.get(), v.get(), MPFR_RNDN);
      return r;
    }
  }

private:
  struct unchecked {};
  Interval(T lo, T hi, unchecked) : lo_(std::move(lo)), hi_(std::move(hi)) {}

  static Interval multiply(const Interval& a, const Interval& b);
  static Interval divide(const Interval& a, const Interval& b);

  T lo_;
  T hi_;

  template <typename U>
  friend class Interval;
};

using IntervalD = Interval<double>;
using IntervalMP = Interval<BigFloat>;

// ---------------------------------------------------------------------------
// Implementation

template <typename T>
Interval<T> Interval<T>::multiply(const Interval& a, const Interval& b) {
  const T zero(0.0);
  const bool a_pos = a.lo_ >= zero, a_neg = a.hi_ <= zero;
  const bool b_pos = b.lo_ >= zero, b_neg = b.hi_ <= zero;
  if (a_pos) {
    if (b_pos) return {R::mul_down(a.lo_, b.lo_), R::mul_up(a.hi_, b.hi_), unchecked{}};
    if (b_neg) return {R::mul_down(a.hi_, b.lo_), R::mul_up(a.lo_, b.hi_), unchecked{}};
    return {R::mul_down(a.hi_, b.lo_), R::mul_up(a.hi_, b.hi_), unchecked{}};
  }
  if (a_neg) {
    if (b_pos) return {R::mul_down(a.lo_, b.hi_), R::mul_up(a.hi_, b.lo_), unchecked{}};
    if (b_neg) return {R::mul_down(a.hi_, b.hi_), R::mul_up(a.lo_, b.lo_), unchecked{}};
    return {R::mul_down(a.lo_, b.hi_), R::mul_up(a.lo_, b.lo_), unchecked{}};
  }
  if (b_pos) return {R::mul_down(a.lo_, b.hi_), R::mul_up(a.hi_, b.hi_), unchecked{}};
  if (b_neg) return {R::mul_down(a.hi_, b.lo_), R::mul_up(a.lo_, b.lo_), unchecked{}};
  T l1 = R::mul_down(a.lo_, b.hi_), l2 = R::mul_down(a.hi_, b.lo_);
  T u1 = R::mul_up(a.lo_, b.lo_), u2 = R::mul_up(a.hi_, b.hi_);
  return {l1 < l2 ? std::move(l1) : std::move(l2), u1 > u2 ? std::move(u1) : std::move(u2), unchecked{}};
}

template <typename T>
Interval<T> Interval<T>::divide(const Interval& a, const Interval& b) {
  const T zero(0.0);
  if (b.lo_ <= zero && b.hi_ >= zero) fail(ErrorCode::domain, "division by an interval containing zero");
  if (b.lo_ > zero) {
    if (a.lo_ >= zero) return {R::div_down(a.lo_, b.hi_), R::div_up(a.hi_, b.lo_), unchecked{}};
    if (a.hi_ <= zero) return {R::div_down(a.lo_, b.lo_), R::div_up(a.hi_, b.hi_), unchecked{}};
    return {R::div_down(a.lo_, b.lo_), R::div_up(a.hi_, b.lo_), unchecked{}};
  }
  if (a.lo_ >= zero) return {R::div_down(a.hi_, b.hi_), R::div_up(a.lo_, b.lo_), unchecked{}};
  if (a.hi_ <= zero) return {R::div_down(a.hi_, b.lo_), R::div_up(a.lo_, b.hi_), unchecked{}};
  return {R::div_down(a.hi_, b.hi_), R::div_up(a.lo_, b.hi_), unchecked{}};
}

template <typename T>
T Interval<T>::mid() const {
  if constexpr (std::is_same_v<T, double>) {
    if (!std::isfinite(lo_) || !std::isfinite(hi_)) return std::isfinite(lo_) ? lo_ : (std::isfinite(hi_) ? hi_ : 0.0);
    const double m = 0.5 * lo_ + 0.5 * hi_;
    return std::clamp(m, lo_, hi_);
  } else {
    T m;
    mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
    mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
    if (m < lo_) return lo_;
    if (m > hi_) return hi_;
    return m;
  }
}

template <typename T>
double Interval<T>::mid_d() const {
  if constexpr (std::is_same_v<T, double>) return mid();
  else return mid().to_double(MPFR_RNDN);
}

template <typename T>
T Interval<T>::rad() const {
  const T m = mid();
  T a = R::sub_up(m, lo_), b = R::sub_up(hi_, m);
  return a > b ? a : b;
}

template <typename T>
double Interval<T>::rad_d() const {
  return R::to_double_up(rad());
}

template <typename T>
bool Interval<T>::is_finite() const {
  if constexpr (std::is_same_v<T, double>) return std::isfinite(lo_) && std::isfinite(hi_);
  else return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get());
}

template <typename T>
template <typename U>
Interval<T> Interval<T>::from(const Interval<U>& x) {
  if constexpr (std::is_same_v<U, double>) {
    return Interval(R::from_double_down(x.lo()), R::from_double_up(x.hi()), unchecked{});
  } else {
    // also rounds a BigFloat source to the current default precision
    return Interval(R::from_big_down(x.lo()), R::from_big_up(x.hi()), unchecked{});
  }
}

template <typename T>
Interval<T> Interval<T>::from_decimal(const std::string& text) {
  return from_decimal(text, text);
}

template <typename T>
Interval<T> Interval<T>::from_decimal(const std::string& lo, const std::string& hi) {
  const BigFloat l = BigFloat::from_string(lo, MPFR_RNDD);
  const BigFloat h = BigFloat::from_string(hi, MPFR_RNDU);
  return Interval(R::from_big_down(l), R::from_big_up(h));
}

template <typename T>
std::string Interval<T>::to_string(int digits) const {
  const BigFloat l = R::to_big_down(lo_);
  const BigFloat h = R::to_big_up(hi_);
  return "[" + l.to_string(digits, MPFR_RNDD) + ", " + h.to_string(digits, MPFR_RNDU) + "]";
}

template <typename T>
std::ostream& operator<<(std::ostream& os, const Interval<T>& x) {
  return os << x.to_string();
}

// ---------------------------------------------------------------------------
// Free functions

template <typename T>
Interval<T> hull(const Interval<T>& a, const Interval<T>& b) {
  return Interval<T>(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
}

template <typename T>
std::optional<Interval<T>> intersect(const Interval<T>& a, const Interval<T>& b) {
  const T& l = a.lo() > b.lo() ? a.lo() : b.lo();
  const T& h = a.hi() < b.hi() ? a.hi() : b.hi();
  if (h < l) return std::nullopt;
  return Interval<T>(l, h);
}

/// Upper bound of |x| over the interval.
template <typename T>
T mag(const Interval<T>& x) {
  T a = Interval<T>::neg(x.lo());
  return a > x.hi() ? a : x.hi();
}

/// Lower bound of |x| over the interval (0 when it contains 0).
template <typename T>
T mig(const Interval<T>& x) {
  if (x.lo() > T(0.0)) return x.lo();
  if (x.hi() < T(0.0)) return Interval<T>::neg(x.hi());
  return T(0.0);
}

template <typename T>
Interval<T> abs(const Interval<T>& x) {
  return Interval<T>(mig(x), mag(x));
}

template <typename T>
Interval<T> sqr(const Interval<T>& x) {
  using R = Rounding<T>;
  const T lo = mig(x), hi = mag(x);
  return Interval<T>(R::mul_down(lo, lo), R::mul_up(hi, hi));
}

template <typename T>
Interval<T> sqrt(const Interval<T>& x) {
  using R = Rounding<T>;
  if (x.lo() < T(0.0)) fail(ErrorCode::domain, "sqrt of an interval with negative part");
  return Interval<T>(R::sqrt_down(x.lo()), R::sqrt_up(x.hi()));
}

template <typename T>
Interval<T> pow(const Interval<T>& x, int n) {
  if (n < 0) return Interval<T>(1.0) / pow(x, -n);
  if (n == 0) return Interval<T>(1.0);
  if (n % 2 == 0) return pow(sqr(x), n / 2);
  Interval<T> r = x;
  Interval<T> base = sqr(x);
  for (int e = (n - 1) / 2; e > 0; e /= 2) {
    if (e & 1) r = r * base;
    if (e > 1) base = sqr(base);
  }
  return r;
}

/// Symmetric interval [-m, m].
template <typename T>
Interval<T> symmetric(const T& m) {
  return Interval<T>(Interval<T>::neg(m), m);
}

template <typename T>
Interval<T> max(const Interval<T>& a, const Interval<T>& b) {
  return Interval<T>(a.lo() > b.lo() ? a.lo() : b.lo(), a.hi() > b.hi() ? a.hi() : b.hi());
}

template <typename T>
Interval<T> min(const Interval<T>& a, const Interval<T>& b) {
  return Interval<T>(a.lo() < b.lo() ? a.lo() : b.lo(), a.hi() < b.hi() ? a.hi() : b.hi());
}

/// Widens x by [-e, e].
template <typename T>
Interval<T> inflate(const Interval<T>& x, const T& e) {
  return x + symmetric(e);
}

// Constants and transcendental functions. These are evaluated with MPFR and
// rounded outward to T.
template <typename T>
Interval<T> pi();
template <typename T>
Interval<T> euler_gamma();
template <typename T>
Interval<T> log(const Interval<T>& x);
template <typename T>
Interval<T> exp(const Interval<T>& x);

extern template Interval<double> pi<double>();
extern template Interval<BigFloat> pi<BigFloat>();
extern template Interval<double> euler_gamma<double>();
extern template Interval<BigFloat> euler_gamma<BigFloat>();
extern template Interval<double> log<double>(const Interval<double>&);
extern template Interval<BigFloat> log<BigFloat>(const Interval<BigFloat>&);
extern template Interval<double> exp<double>(const Interval<double>&);
extern template Interval<BigFloat> exp<BigFloat>(const Interval<BigFloat>&);

} // namespace tricert
