#pragma once

#include "tricert/interval.hpp"

#include <vector>

namespace tricert {

inline constexpr int kDefaultTaylorDegree = 25;
inline constexpr int kMaxTaylorDegree = 64;

/// Truncated Taylor expansion f(tau + s) = sum_k f_k s^k, k <= order, with
/// interval coefficients. When the base point tau ranges over an interval the
/// coefficients enclose f^{(k)}(tau)/k! for every tau in it.
template <typename T>
class Jet {
public:
  using I = Interval<T>;

  Jet() = default;
  explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, I(0.0)) {}
  static Jet constant(int order, const I& value) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }
  /// base + slope * s
  static Jet linear(int order, const I& base, const I& slope) {
    Jet j(order);
    j.c_[0] = base;
    if (order >= 1) j.c_[1] = slope;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  I& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }
  const I& operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  const std::vector<I>& coeffs() const { return c_; }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= order(); ++k) c_[k] = c_[k] + o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= order(); ++k) c_[k] = c_[k] - o.c_[k];
    return *this;
  }
  Jet& operator*=(const I& s) {
    for (auto& v : c_) v = v * s;
    return *this;
  }
  /// this += s * o
  void add_scaled(const I& s, const Jet& o) {
    for (int k = 0; k <= order(); ++k)
      if (!o.c_[k].is_point() || !(o.c_[k].lo() == T(0.0))) c_[k] = c_[k] + s * o.c_[k];
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const I& s) { return a *= s; }
  friend Jet operator*(const I& s, Jet a) { return a *= s; }
  friend Jet operator-(const Jet& a) {
    Jet r(a.order());
    for (int k = 0; k <= a.order(); ++k) r.c_[k] = -a.c_[k];
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) { return multiply(a, b); }

  /// Truncated product. `a_low`/`b_low` are indices below which the operands
  /// are known to vanish.
  static Jet multiply(const Jet& a, const Jet& b, int a_low = 0, int b_low = 0);

private:
  std::vector<I> c_;
};

template <typename T>
Jet<T> Jet<T>::multiply(const Jet& a, const Jet& b, int a_low, int b_low) {
  const int n = a.order();
  Jet r(n);
  // Trailing zero coefficients (e.g. linear jets) are skipped.
  int a_high = n, b_high = n;
  const T zero(0.0);
  while (a_high > a_low && a.c_[a_high].lo() == zero && a.c_[a_high].hi() == zero) --a_high;
  while (b_high > b_low && b.c_[b_high].lo() == zero && b.c_[b_high].hi() == zero) --b_high;
  for (int k = a_low + b_low; k <= n; ++k) {
    const int i_lo = std::max(a_low, k - b_high);
    const int i_hi = std::min(a_high, k - b_low);
    if (i_lo > i_hi) continue;
    Interval<T> acc = a.c_[i_lo] * b.c_[k - i_lo];
    for (int i = i_lo + 1; i <= i_hi; ++i) acc = acc + a.c_[i] * b.c_[k - i];
    r.c_[k] = std::move(acc);
  }
  return r;
}

template <typename T>
Jet<T> square(const Jet<T>& a) {
  const int n = a.order();
  Jet<T> r(n);
  for (int k = 0; k <= n; ++k) {
    Interval<T> acc(0.0);
    for (int i = 0; 2 * i < k; ++i) acc = acc + a[i] * a[k - i];
    acc = acc + acc;
    if (k % 2 == 0) acc = acc + sqr(a[k / 2]);
    r[k] = std::move(acc);
  }
  return r;
}

template <typename T>
Jet<T> reciprocal(const Jet<T>& g) {
  const int n = g.order();
  Jet<T> q(n);
  q[0] = Interval<T>(1.0) / g[0];
  for (int k = 1; k <= n; ++k) {
    Interval<T> acc = g[1] * q[k - 1];
    for (int j = 2; j <= k; ++j) acc = acc + g[j] * q[k - j];
    q[k] = -(acc * q[0]);
  }
  return q;
}

template <typename T>
Jet<T> sqrt(const Jet<T>& s) {
  const int n = s.order();
  Jet<T> r(n);
  r[0] = sqrt(s[0]);
  if (n == 0) return r;
  const Interval<T> inv_two_r0 = Interval<T>(1.0) / (Interval<T>(2.0) * r[0]);
  for (int k = 1; k <= n; ++k) {
    Interval<T> acc = s[k];
    for (int j = 1; j < k; ++j) acc = acc - r[j] * r[k - j];
    r[k] = acc * inv_two_r0;
  }
  return r;
}

/// Powers (g - g_0)^k for k = 0..order, reused when composing several
/// functions with the same inner jet.
template <typename T>
std::vector<Jet<T>> shift_powers(const Jet<T>& g) {
  const int n = g.order();
  Jet<T> delta = g;
  delta[0] = Interval<T>(0.0);
  std::vector<Jet<T>> powers;
  powers.reserve(static_cast<std::size_t>(n) + 1);
  powers.push_back(Jet<T>::constant(n, Interval<T>(1.0)));
  if (n >= 1) powers.push_back(delta);
  for (int k = 2; k <= n; ++k) powers.push_back(Jet<T>::multiply(powers.back(), delta, k - 1, 1));
  return powers;
}

/// f(g(s)) from the Taylor coefficients `series[k]` = f^{(k)}(g_0)/k! and the
/// shifted powers of g.
template <typename T>
Jet<T> compose(const std::vector<Interval<T>>& series, const std::vector<Jet<T>>& powers) {
  const int n = powers.front().order();
  Jet<T> r(n);
  r[0] = series[0];
  for (int k = 1; k <= n && k < static_cast<int>(series.size()); ++k)
    for (int j = k; j <= n; ++j) r[j] = r[j] + series[k] * powers[k][j];
  return r;
}

/// v(t) in sum_j v_j t^j + [-R, R] |t|^{m+1} for t in [-1, 1].
template <typename T>
struct TaylorModel {
  std::vector<Interval<T>> coeffs;
  T remainder = T(0.0);

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }

  /// Builds the model from the expansion at t = 0 (order >= m) and the
  /// expansion over the whole parameter range t in [-1, 1] (order >= m+1).
  static TaylorModel from_jets(const Jet<T>& at_mid, const Jet<T>& over_segment, int m) {
    if (m < 0 || m > kMaxTaylorDegree) fail(ErrorCode::order_overflow, "Taylor degree out of range");
    TaylorModel model;
    model.coeffs.assign(at_mid.coeffs().begin(), at_mid.coeffs().begin() + m + 1);
    model.remainder = mag(over_segment[m + 1]);
    return model;
  }

  /// Enclosure of the modeled function at parameter values t (a subset of [-1, 1]).
  Interval<T> eval(const Interval<T>& t) const {
    Interval<T> acc = coeffs.back();
    for (int j = degree() - 1; j >= 0; --j) acc = acc * t + coeffs[j];
    const Interval<T> tail = pow(abs(t), degree() + 1) * symmetric(remainder);
    return acc + tail;
  }

  /// Enclosure over the whole parameter range.
  Interval<T> range() const {
    // odd powers of t range over [-1, 1], even powers over [0, 1]
    const Interval<T> odd(T(-1.0), T(1.0)), even(T(0.0), T(1.0));
    Interval<T> acc = coeffs[0];
    for (int j = 1; j <= degree(); ++j) acc = acc + coeffs[j] * (j % 2 == 0 ? even : odd);
    return acc + symmetric(remainder);
  }
};

/// Product of two models of the same degree m. Terms of degree above m are
/// moved into the remainder, using |t|^j <= |t|^{m+1} on [-1, 1].
template <typename T>
TaylorModel<T> multiply(const TaylorModel<T>& a, const TaylorModel<T>& b) {
  using I = Interval<T>;
  const int m = a.degree();
  if (b.degree() != m) fail(ErrorCode::precondition, "Taylor model degrees differ");
  TaylorModel<T> r;
  r.coeffs.assign(static_cast<std::size_t>(m) + 1, I(0.0));
  I excess(0.0);
  for (int k = 0; k <= 2 * m; ++k) {
    I acc(0.0);
    for (int i = std::max(0, k - m); i <= std::min(k, m); ++i) acc = acc + a.coeffs[i] * b.coeffs[k - i];
    if (k <= m) r.coeffs[k] = acc;
    else excess = excess + I(mag(acc), mag(acc));
  }
  TaylorModel<T> pa = a, pb = b;
  pa.remainder = T(0.0);
  pb.remainder = T(0.0);
  const I ma(mag(pa.range()), mag(pa.range())), mb(mag(pb.range()), mag(pb.range()));
  const I ra(a.remainder, a.remainder), rb(b.remainder, b.remainder);
  r.remainder = (excess + ma * rb + mb * ra + ra * rb).hi();
  return r;
}

/// Integral over a segment of length `length` of a function modeled on the
/// segment's affine parametrization t in [-1, 1]:
///   |sigma| (sum_i v_{2i}/(2i+1) +- R/(m+2)).
/// The model degree must be odd.
template <typename T>
Interval<T> integrate_even_part(const TaylorModel<T>& model, const Interval<T>& length) {
  const int m = model.degree();
  if (m % 2 == 0) fail(ErrorCode::parity, "integrate_even_part needs an odd model degree");
  if (length.lo() < T(0.0)) fail(ErrorCode::domain, "negative segment length");
  Interval<T> acc(0.0);
  for (int i = 0; 2 * i <= m; ++i) acc = acc + model.coeffs[2 * i] / Interval<T>(2 * i + 1);
  acc = acc + symmetric(model.remainder) / Interval<T>(m + 2);
  return length * acc;
}

} // namespace tricert
