#pragma once

#include "tricert/interval_eigen.hpp"

#include <array>

namespace tricert {

/// Triangle with vertices (0,0), (1,0) and apex (c_x, c_y), c_y > 0.
template <typename T>
class Triangle {
public:
  using I = Interval<T>;

  Triangle(I cx, I cy);
  static Triangle apex(double cx, double cy) { return Triangle(I(cx), I(cy)); }

  const I& cx() const { return cx_; }
  const I& cy() const { return cy_; }
  /// Vertex i in {0, 1, 2}; vertex 2 is the apex.
  Vec2<T> vertex(int i) const;
  /// Length of the side opposite vertex i.
  I side(int i) const;
  I area() const { return cy_ / I(2.0); }
  I perimeter() const { return side(0) + side(1) + side(2); }
  I diameter() const { return max(max(side(0), side(1)), side(2)); }
  Vec2<T> centroid() const;

  template <typename U>
  Triangle<U> cast() const { return Triangle<U>(Interval<U>::from(cx_), Interval<U>::from(cy_)); }

private:
  I cx_, cy_;
};

template <typename T>
struct Incircle {
  Vec2<T> center;
  Interval<T> rho;
};

/// Incenter (side-length weighted vertex average) and inradius area/s.
template <typename T>
Incircle<T> incenter_inradius(const Triangle<T>& tri);

/// Containment of one triangle in a scaled copy of the other.
template <typename T>
struct HomothetyCertificate {
  enum class Direction { T_in_scaled_Tprime, Tprime_in_scaled_T };
  Interval<T> factor;
  Direction direction;
  /// The scaled copy of the container is anchor + factor (x - source) for x
  /// in the container.
  Vec2<T> source;
  Vec2<T> anchor;
};

/// Certificate from the cross products p = AC x AC' and q = BC x BC'. Both
/// directions are tried and the smaller factor is returned.
template <typename T>
HomothetyCertificate<T> containment_homothety(const Triangle<T>& t, const Triangle<T>& tp);

/// Apex perturbations C + t v, t in [-ell, ell].
template <typename T>
struct SegmentPerturbation {
  Triangle<T> base;
  Vec2<T> v;
  Interval<T> ell;
};

enum class StabilityMode { same_sign, mixed_sign };

/// p_v = AC x v and q_v = BC x v.
template <typename T>
std::array<Interval<T>, 2> perturbation_cross_products(const SegmentPerturbation<T>& s);

/// Mode whose sign hypotheses hold for every value of p_v, q_v; when both do
/// (a vanishing cross product) the one with the tighter bound.
template <typename T>
StabilityMode select_mode(const SegmentPerturbation<T>& s);

/// Range of lambda_n^{(t)} / lambda_n over t in [-ell, ell], valid for every n.
template <typename T>
Interval<T> eigenvalue_ratio_bounds(const SegmentPerturbation<T>& s, StabilityMode mode);

/// Range of xi_n1^{(t)} / xi_n1 over t in [-ell, ell].
template <typename T>
Interval<T> quotient_ratio_bounds(const SegmentPerturbation<T>& s, StabilityMode mode);

/// r with |xi_n1^{(t)} - xi_n1| <= r.hi() for t in [-ell, ell].
template <typename T>
Interval<T> quotient_stability_radius(const SegmentPerturbation<T>& s, const Interval<T>& xi, StabilityMode mode);

} // namespace tricert
