#include "tricert/bessel.hpp"

#include <cmath>

namespace tricert {

namespace {

using IMP = Interval<BigFloat>;

constexpr int kMaxSeriesTerms = 200000;
constexpr mpfr_prec_t kMaxWorkingPrecision = mpfr_prec_t(1) << 20;

// Alternating ascending series lose about log2(largest term) bits to
// cancellation; `growth` is the natural log of that term.
mpfr_prec_t working_precision(mpfr_prec_t target, double growth) {
  if (!std::isfinite(growth)) fail(ErrorCode::precision_exhausted, "Bessel argument is not finite");
  const double bits = static_cast<double>(target) + 24.0 + std::ceil(growth * 1.4426950408889634);
  if (bits > static_cast<double>(kMaxWorkingPrecision))
    fail(ErrorCode::precision_exhausted, "Bessel series needs more than 2^20 bits");
  return static_cast<mpfr_prec_t>(bits);
}

double mag_d(const IMP& x) { return mag(x).to_double(MPFR_RNDU); }

IMP factorial(int n) {
  IMP f(1.0);
  for (int i = 2; i <= n; ++i) f = f * IMP(i);
  return f;
}

// A term is negligible once it sits p+2 binades below the largest term.
bool negligible(const BigFloat& term, const BigFloat& largest) {
  if (term.is_zero()) return true;
  if (largest.is_zero()) return false;
  return mpfr_get_exp(term.get()) + BigFloat::default_precision() + 2 <= mpfr_get_exp(largest.get());
}

IMP unit_ball() { return IMP(BigFloat(-1.0), BigFloat(1.0)); }

IMP hull_intersect(const IMP& a, const IMP& b) {
  auto r = intersect(a, b);
  return r ? *r : a;
}

// F_n(w) = sum (-w)^k / (k! (n+k)!) over every point of w. For k >= K the
// term ratio is at most |w|/((K+1)(n+K+1)) <= 1/2, so the tail is bounded by
// the last term added.
IMP series_entire(int n, const IMP& w) {
  const double wm = mag_d(w);
  IMP t = IMP(1.0) / factorial(n);
  IMP sum = t;
  BigFloat largest = mag(t);
  for (int k = 1;; ++k) {
    t = -(t * w) / IMP(static_cast<double>(k) * (n + k));
    sum = sum + t;
    const BigFloat tm = mag(t);
    if (tm > largest) largest = tm;
    const double ratio = wm / ((k + 1.0) * (n + k + 1.0));
    if (ratio <= 0.49 && negligible(tm, largest)) return sum + symmetric(tm);
    if (k > kMaxSeriesTerms) fail(ErrorCode::precision_exhausted, "Bessel series did not converge");
  }
}

IMP series_j(int n, const IMP& x) {
  const IMP half = x / IMP(2.0);
  return pow(half, n) * series_entire(n, sqr(half));
}

// Y_0 and Y_1 from their logarithmic ascending series, x > 0:
//   Y0 = (2/pi) [ (ln(x/2)+gamma) J0 - sum_{k>=1} H_k a_k ],  a_k = (-q)^k/(k!)^2
//   Y1 = (2/pi) [ (ln(x/2)+gamma) J1 - 1/x - (x/4) sum_k (H_k + H_{k+1}) b_k ],
//        b_k = (-q)^k/(k!(k+1)!),  q = x^2/4.
// Tails are dominated by k|a_k| and (2k+3)|b_k|, whose ratios stay below
// (5/3) q/(k(k+1)).
void series_y01(const IMP& x, IMP& y0, IMP& y1) {
  const IMP half = x / IMP(2.0);
  const IMP q = sqr(half);
  const double qm = mag_d(q);
  const IMP lg = log(half) + euler_gamma<BigFloat>();

  IMP a(1.0), b(1.0), h(0.0);
  IMP j0s = a, j1s = b, s0(0.0), s1 = b;  // H_0 + H_1 = 1
  BigFloat largest = mag(a);
  for (int k = 1;; ++k) {
    a = -(a * q) / IMP(static_cast<double>(k) * k);
    b = -(b * q) / IMP(static_cast<double>(k) * (k + 1));
    h = h + IMP(1.0) / IMP(k);
    const IMP h_next = h + IMP(1.0) / IMP(k + 1);
    j0s = j0s + a;
    j1s = j1s + b;
    s0 = s0 + h * a;
    s1 = s1 + (h + h_next) * b;

    const BigFloat am = mag(a), bm = mag(b);
    const BigFloat d0 = Rounding<BigFloat>::mul_up(am, BigFloat(static_cast<double>(k)));
    const BigFloat d1 = Rounding<BigFloat>::mul_up(bm, BigFloat(2.0 * k + 3.0));
    const BigFloat& dmax = d0 > d1 ? d0 : d1;
    if (dmax > largest) largest = dmax;
    const double ratio = (5.0 / 3.0) * qm / (k * (k + 1.0));
    if (ratio <= 0.49 && negligible(dmax, largest)) {
      j0s = j0s + symmetric(am);
      j1s = j1s + symmetric(bm);
      s0 = s0 + symmetric(d0);
      s1 = s1 + symmetric(d1);
      break;
    }
    if (k > kMaxSeriesTerms) fail(ErrorCode::precision_exhausted, "Bessel series did not converge");
  }
  const IMP two_over_pi = IMP(2.0) / pi<BigFloat>();
  y0 = two_over_pi * (lg * j0s - s0);
  y1 = two_over_pi * (lg * half * j1s - IMP(1.0) / x - half * s1 / IMP(2.0));
}

// Y_0..Y_top by forward recurrence Y_{k+1} = (2k/x) Y_k - Y_{k-1}; Y_n is
// the dominant solution, so the recurrence is stable.
std::vector<IMP> y_table(int top, const IMP& x) {
  std::vector<IMP> y(static_cast<std::size_t>(std::max(top, 1)) + 1);
  series_y01(x, y[0], y[1]);
  const IMP inv_x = IMP(1.0) / x;
  for (int k = 1; k < top; ++k) y[k + 1] = IMP(2.0 * k) * inv_x * y[k] - y[k - 1];
  y.resize(static_cast<std::size_t>(top) + 1);
  return y;
}

IMP point_of(const IMP& x) {
  const BigFloat m = x.mid();
  return IMP(m, m);
}

// Mean-value form with |J_n'| <= 1, intersected with the naive enclosure.
IMP j_enclosure(int n, const IMP& x) {
  IMP naive = series_j(n, x);
  if (!x.is_point()) {
    const IMP m = point_of(x);
    naive = hull_intersect(naive, series_j(n, m) + unit_ball() * (x - m));
  }
  return hull_intersect(naive, unit_ball());
}

// Y_0..Y_top over every point of x (x > 0).
std::vector<IMP> y_enclosures(int top, const IMP& x) {
  if (!x.certainly_positive()) fail(ErrorCode::domain, "Bessel Y needs a positive argument");
  if (x.is_point()) return y_table(top, x);
  const std::vector<IMP> naive = y_table(top + 1, x);
  const IMP m = point_of(x);
  const std::vector<IMP> at_mid = y_table(top, m);
  const IMP dx = x - m;
  std::vector<IMP> out(static_cast<std::size_t>(top) + 1);
  for (int nu = 0; nu <= top; ++nu) {
    const IMP deriv = nu == 0 ? -naive[1] : (naive[nu - 1] - naive[nu + 1]) / IMP(2.0);
    out[nu] = hull_intersect(naive[nu], at_mid[nu] + deriv * dx);
  }
  return out;
}

// Mean-value form with F_n' = -F_{n+1} and |F_{n+1}(w)| <= 1/(n+1)! for w >= 0.
IMP entire_enclosure(int n, const IMP& w) {
  IMP naive = series_entire(n, w);
  if (w.is_point() || !w.certainly_nonnegative()) return naive;
  const IMP m = point_of(w);
  const IMP slope = unit_ball() / factorial(n + 1);
  naive = hull_intersect(naive, series_entire(n, m) + slope * (w - m));
  return hull_intersect(naive, unit_ball() / factorial(n));
}

template <typename T>
mpfr_prec_t target_bits() {
  return static_cast<mpfr_prec_t>(Rounding<T>::precision_bits());
}

template <typename T>
double mag_of(const Interval<T>& x) {
  return Rounding<T>::to_double_up(mag(x));
}

template <typename T>
std::vector<Interval<T>> round_out(const std::vector<IMP>& v) {
  std::vector<Interval<T>> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(Interval<T>::from(x));
  return out;
}

} // namespace

template <typename T>
Interval<T> bessel(BesselKind kind, int order, const Interval<T>& x) {
  if (order < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (!x.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  IMP result;
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), mag_of(x)));
    const IMP xm = IMP::from(x);
    result = kind == BesselKind::first ? j_enclosure(order, xm) : y_enclosures(order, xm)[order];
  }
  return Interval<T>::from(result);
}

template <typename T>
Interval<T> bessel_entire(int order, const Interval<T>& w) {
  if (order < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (!w.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  IMP result;
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), 2.0 * std::sqrt(mag_of(w))));
    result = entire_enclosure(order, IMP::from(w));
  }
  return Interval<T>::from(result);
}

template <typename T>
std::vector<Interval<T>> bessel_table(BesselKind kind, int top, const Interval<T>& x) {
  if (top < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (!x.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  std::vector<IMP> out;
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), mag_of(x)));
    const IMP xm = IMP::from(x);
    if (kind == BesselKind::second) {
      out = y_enclosures(top, xm);
    } else {
      for (int nu = 0; nu <= top; ++nu) out.push_back(j_enclosure(nu, xm));
    }
  }
  return round_out<T>(out);
}

template <typename T>
std::vector<Interval<T>> bessel_entire_table(int top, const Interval<T>& w) {
  if (top < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (!w.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  std::vector<IMP> out;
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), 2.0 * std::sqrt(mag_of(w))));
    const IMP wm = IMP::from(w);
    for (int nu = 0; nu <= top; ++nu) out.push_back(entire_enclosure(nu, wm));
  }
  return round_out<T>(out);
}

template <typename T>
std::vector<Interval<T>> bessel_derivative_series(BesselKind kind, int order, const Interval<T>& z, int m) {
  if (order < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (m < 0 || m > kMaxTaylorDegree + 1) fail(ErrorCode::order_overflow, "Taylor order exceeds the configured maximum");
  if (!z.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  std::vector<IMP> coeffs(static_cast<std::size_t>(m) + 1);
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), mag_of(z)));
    const IMP zm = IMP::from(z);
    const int top = order + m;
    std::vector<IMP> base;
    if (kind == BesselKind::first) {
      base.reserve(static_cast<std::size_t>(top) + 1);
      for (int nu = 0; nu <= top; ++nu) base.push_back(j_enclosure(nu, zm));
    } else {
      base = y_enclosures(top, zm);
    }
    // C_{-nu} = (-1)^nu C_nu for both kinds
    auto at = [&](int nu) { return nu >= 0 ? base[nu] : ((-nu) % 2 ? -base[-nu] : base[-nu]); };
    std::vector<IMP> cur;
    cur.reserve(2 * static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= 2 * m; ++i) cur.push_back(at(order - m + i));
    coeffs[0] = cur[m];
    IMP fact(1.0);
    for (int k = 1; k <= m; ++k) {
      for (int i = 0; i + 2 < static_cast<int>(cur.size()); ++i) cur[i] = (cur[i] - cur[i + 2]) / IMP(2.0);
      cur.resize(cur.size() - 2);
      fact = fact * IMP(k);
      coeffs[k] = cur[m - k] / fact;
      if (kind == BesselKind::first) coeffs[k] = hull_intersect(coeffs[k], unit_ball() / fact);
    }
  }
  return round_out<T>(coeffs);
}

template <typename T>
std::vector<Interval<T>> entire_derivative_series(int order, const Interval<T>& w, int m) {
  if (order < 0) fail(ErrorCode::domain, "negative Bessel order");
  if (m < 0 || m > kMaxTaylorDegree + 1) fail(ErrorCode::order_overflow, "Taylor order exceeds the configured maximum");
  if (!w.is_finite()) fail(ErrorCode::domain, "Bessel argument is not finite");
  std::vector<IMP> coeffs(static_cast<std::size_t>(m) + 1);
  {
    PrecisionGuard guard(working_precision(target_bits<T>(), 2.0 * std::sqrt(mag_of(w))));
    const IMP wm = IMP::from(w);
    IMP fact(1.0);
    for (int k = 0; k <= m; ++k) {
      if (k > 0) fact = fact * IMP(k);
      const IMP f = entire_enclosure(order + k, wm) / fact;
      coeffs[k] = k % 2 ? -f : f;
    }
  }
  return round_out<T>(coeffs);
}

template <typename T>
Jet<T> polynomial_jet(const std::vector<Interval<T>>& coeffs, const Interval<T>& base, int order) {
  const int deg = static_cast<int>(coeffs.size()) - 1;
  Jet<T> jet(order);
  // Pascal rows as intervals: exact while they fit, outward rounded beyond.
  std::vector<std::vector<Interval<T>>> binom(static_cast<std::size_t>(deg) + 1);
  for (int j = 0; j <= deg; ++j) {
    binom[j].assign(static_cast<std::size_t>(j) + 1, Interval<T>(1.0));
    for (int k = 1; k < j; ++k) binom[j][k] = binom[j - 1][k - 1] + binom[j - 1][k];
  }
  for (int k = 0; k <= std::min(order, deg); ++k) {
    Interval<T> acc = binom[deg][k] * coeffs[deg];
    for (int j = deg - 1; j >= k; --j) acc = acc * base + binom[j][k] * coeffs[j];
    jet[k] = acc;
  }
  return jet;
}

template <typename T>
TaylorModel<T> bessel_taylor(BesselKind kind, int order, const TaylorModel<T>& path, int m) {
  if (m < 0 || m > kMaxTaylorDegree) fail(ErrorCode::order_overflow, "Taylor degree exceeds the configured maximum");
  if (!(path.remainder == T(0.0))) fail(ErrorCode::precondition, "argument path must be an exact polynomial");
  const Jet<T> mid = polynomial_jet(path.coeffs, Interval<T>(0.0), m);
  const Jet<T> whole = polynomial_jet(path.coeffs, Interval<T>(T(-1.0), T(1.0)), m + 1);
  return TaylorModel<T>::from_jets(bessel_jet(kind, order, mid), bessel_jet(kind, order, whole), m);
}

IntervalD bessel_j0_first_zero() {
  static const IntervalD zero = [] {
    double lo = 2.404825, hi = 2.404826;
    auto sign = [](double x) {
      const IntervalD v = bessel(BesselKind::first, 0, IntervalD(x));
      if (v.certainly_positive()) return 1;
      if (v.certainly_negative()) return -1;
      return 0;
    };
    if (sign(lo) != 1 || sign(hi) != -1) fail(ErrorCode::numeric_backend, "J0 sign change not certified");
    for (int it = 0; it < 64; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const int s = sign(mid);
      if (s == 0) break;
      (s > 0 ? lo : hi) = mid;
    }
    return IntervalD(lo, hi);
  }();
  return zero;
}

#define TRICERT_BESSEL_INSTANTIATE(T)                                                                        \
  template Interval<T> bessel<T>(BesselKind, int, const Interval<T>&);                                      \
  template Interval<T> bessel_entire<T>(int, const Interval<T>&);                                           \
  template std::vector<Interval<T>> bessel_table<T>(BesselKind, int, const Interval<T>&);                   \
  template std::vector<Interval<T>> bessel_entire_table<T>(int, const Interval<T>&);                        \
  template std::vector<Interval<T>> bessel_derivative_series<T>(BesselKind, int, const Interval<T>&, int);  \
  template std::vector<Interval<T>> entire_derivative_series<T>(int, const Interval<T>&, int);              \
  template Jet<T> polynomial_jet<T>(const std::vector<Interval<T>>&, const Interval<T>&, int);              \
  template TaylorModel<T> bessel_taylor<T>(BesselKind, int, const TaylorModel<T>&, int);

TRICERT_BESSEL_INSTANTIATE(double)
TRICERT_BESSEL_INSTANTIATE(BigFloat)

} // namespace tricert
