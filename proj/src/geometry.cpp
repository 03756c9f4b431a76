#include "tricert/geometry.hpp"

namespace tricert {

template <typename T>
Triangle<T>::Triangle(I cx, I cy) : cx_(std::move(cx)), cy_(std::move(cy)) {
  if (!cy_.certainly_positive()) fail(ErrorCode::degenerate_triangle, "apex height must be certainly positive");
  if (!cx_.is_finite() || !cy_.is_finite()) fail(ErrorCode::degenerate_triangle, "apex is not finite");
}

template <typename T>
Vec2<T> Triangle<T>::vertex(int i) const {
  switch (i) {
  case 0: return vec2(I(0.0), I(0.0));
  case 1: return vec2(I(1.0), I(0.0));
  default: return vec2(cx_, cy_);
  }
}

template <typename T>
Interval<T> Triangle<T>::side(int i) const {
  if (i == 2) return I(1.0);
  return norm<T>(vertex((i + 1) % 3) - vertex((i + 2) % 3));
}

template <typename T>
Vec2<T> Triangle<T>::centroid() const {
  return vec2((I(1.0) + cx_) / I(3.0), cy_ / I(3.0));
}

template <typename T>
Incircle<T> incenter_inradius(const Triangle<T>& tri) {
  using I = Interval<T>;
  const I a0 = tri.side(0), a1 = tri.side(1), a2 = tri.side(2);
  const I per = a0 + a1 + a2;
  // vertex 0 is the origin
  const Vec2<T> c = (tri.vertex(1) * a1 + tri.vertex(2) * a2) / per;
  return {c, I(2.0) * tri.area() / per};
}

namespace {

template <typename T>
HomothetyCertificate<T> one_direction(const Triangle<T>& t, const Triangle<T>& tp, bool swapped) {
  using I = Interval<T>;
  using Dir = typename HomothetyCertificate<T>::Direction;
  const Dir dir = swapped ? Dir::Tprime_in_scaled_T : Dir::T_in_scaled_Tprime;
  const I p = t.cx() * tp.cy() - t.cy() * tp.cx();
  const I q = (t.cx() - I(1.0)) * tp.cy() - t.cy() * (tp.cx() - I(1.0));
  const int sp = p.certainly_positive() ? 1 : (p.certainly_negative() ? -1 : 0);
  const int sq = q.certainly_positive() ? 1 : (q.certainly_negative() ? -1 : 0);
  if (sp == 0 || sq == 0) fail(ErrorCode::sign_ambiguous, "cross products p, q do not have certified signs");
  const Vec2<T> a = t.vertex(0), b = t.vertex(1);
  if (sp < 0 && sq < 0) return {I(1.0) - p / tp.cy(), dir, b, b};  // fixes B
  if (sp > 0 && sq > 0) return {I(1.0) + q / tp.cy(), dir, a, a};  // fixes A
  if (sp > 0) return {I(1.0), dir, a, a};                          // direct containment
  return {t.cy() / tp.cy(), dir, tp.vertex(2), t.vertex(2)};       // apex onto apex
}

} // namespace

template <typename T>
HomothetyCertificate<T> containment_homothety(const Triangle<T>& t, const Triangle<T>& tp) {
  auto forward = one_direction(t, tp, false);
  auto backward = one_direction(tp, t, true);
  return backward.factor.hi() < forward.factor.hi() ? backward : forward;
}

template <typename T>
std::array<Interval<T>, 2> perturbation_cross_products(const SegmentPerturbation<T>& s) {
  const Vec2<T> c = s.base.vertex(2);
  return {cross<T>(c, s.v), cross<T>(c - s.base.vertex(1), s.v)};
}

namespace {

template <typename T>
bool admissible(const SegmentPerturbation<T>& s, StabilityMode mode) {
  const auto [p, q] = perturbation_cross_products(s);
  const T zero(0.0);
  const bool p_nonneg = p.lo() >= zero, p_nonpos = p.hi() <= zero;
  const bool q_nonneg = q.lo() >= zero, q_nonpos = q.hi() <= zero;
  // A vanishing cross product is a limit of both configurations, and the
  // bounds are continuous in the apex, so zero is compatible with either mode.
  if (mode == StabilityMode::same_sign) return (p_nonneg && q_nonneg) || (p_nonpos && q_nonpos);
  return (p_nonneg && q_nonpos) || (p_nonpos && q_nonneg);
}

template <typename T>
Interval<T> lowered_height(const SegmentPerturbation<T>& s) {
  if (s.ell.lo() < T(0.0)) fail(ErrorCode::domain, "negative perturbation length");
  const Interval<T> d = s.base.cy() - s.ell * abs(s.v.y());
  if (!d.certainly_positive()) fail(ErrorCode::degenerate_triangle, "c_y - ell |v_y| is not positive");
  return d;
}

} // namespace

template <typename T>
StabilityMode select_mode(const SegmentPerturbation<T>& s) {
  const bool same = admissible(s, StabilityMode::same_sign), mixed = admissible(s, StabilityMode::mixed_sign);
  if (same && mixed) {
    const Interval<T> xi(1.0);
    return quotient_stability_radius(s, xi, StabilityMode::same_sign).hi() <=
                   quotient_stability_radius(s, xi, StabilityMode::mixed_sign).hi()
               ? StabilityMode::same_sign
               : StabilityMode::mixed_sign;
  }
  if (same) return StabilityMode::same_sign;
  if (mixed) return StabilityMode::mixed_sign;
  fail(ErrorCode::sign_ambiguous, "p_v and q_v do not have certified signs");
}

namespace {

// (1 + ell |p_v| / D, 1 + ell |q_v| / D) and c_y / D, all >= 1.
template <typename T>
std::array<Interval<T>, 3> growth_factors(const SegmentPerturbation<T>& s, StabilityMode mode) {
  using I = Interval<T>;
  if (!admissible(s, mode)) fail(ErrorCode::mode_mismatch, "certified signs of p_v, q_v contradict the requested mode");
  const I d = lowered_height(s);
  const auto [p, q] = perturbation_cross_products(s);
  const I fp = I(1.0) + s.ell * I(mag(p), mag(p)) / d;
  const I fq = I(1.0) + s.ell * I(mag(q), mag(q)) / d;
  return {fp, fq, s.base.cy() / d};
}

} // namespace

template <typename T>
Interval<T> eigenvalue_ratio_bounds(const SegmentPerturbation<T>& s, StabilityMode mode) {
  using I = Interval<T>;
  const auto [fp, fq, fh] = growth_factors(s, mode);
  const I m = mode == StabilityMode::same_sign ? max(fp, fq) : fh;
  const I up = sqr(m);
  return I((I(1.0) / up).lo(), up.hi());
}

template <typename T>
Interval<T> quotient_ratio_bounds(const SegmentPerturbation<T>& s, StabilityMode mode) {
  using I = Interval<T>;
  const auto [fp, fq, fh] = growth_factors(s, mode);
  const I up = mode == StabilityMode::same_sign ? sqr(fp * fq) : sqr(fh);
  return I((I(1.0) / up).lo(), up.hi());
}

template <typename T>
Interval<T> quotient_stability_radius(const SegmentPerturbation<T>& s, const Interval<T>& xi, StabilityMode mode) {
  using I = Interval<T>;
  const auto [fp, fq, fh] = growth_factors(s, mode);
  const I up = mode == StabilityMode::same_sign ? sqr(fp * fq) : sqr(fh);
  const I r = abs(xi) * (up - I(1.0));
  return I(T(0.0), r.hi());
}

#define TRICERT_GEOMETRY_INSTANTIATE(T)                                                                       \
  template class Triangle<T>;                                                                                 \
  template Incircle<T> incenter_inradius<T>(const Triangle<T>&);                                              \
  template HomothetyCertificate<T> containment_homothety<T>(const Triangle<T>&, const Triangle<T>&);          \
  template std::array<Interval<T>, 2> perturbation_cross_products<T>(const SegmentPerturbation<T>&);          \
  template StabilityMode select_mode<T>(const SegmentPerturbation<T>&);                                       \
  template Interval<T> eigenvalue_ratio_bounds<T>(const SegmentPerturbation<T>&, StabilityMode);             \
  template Interval<T> quotient_ratio_bounds<T>(const SegmentPerturbation<T>&, StabilityMode);               \
  template Interval<T> quotient_stability_radius<T>(const SegmentPerturbation<T>&, const Interval<T>&, StabilityMode);

TRICERT_GEOMETRY_INSTANTIATE(double)
TRICERT_GEOMETRY_INSTANTIATE(BigFloat)

} // namespace tricert
