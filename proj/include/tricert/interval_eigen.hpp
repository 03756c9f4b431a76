#pragma once

// Lets Interval<T> serve as an Eigen scalar (fixed-size vectors of
// enclosures, dot products, interval matrix-vector products).

#include "tricert/interval.hpp"

#include <Eigen/Core>

namespace tricert {

template <typename T>
const Interval<T>& conj(const Interval<T>& x) { return x; }
template <typename T>
const Interval<T>& real(const Interval<T>& x) { return x; }
template <typename T>
Interval<T> imag(const Interval<T>&) { return Interval<T>(0.0); }
template <typename T>
Interval<T> abs2(const Interval<T>& x) { return sqr(x); }

template <typename T>
using Vec2 = Eigen::Matrix<Interval<T>, 2, 1>;

template <typename T>
Vec2<T> vec2(const Interval<T>& x, const Interval<T>& y) {
  Vec2<T> v;
  v << x, y;
  return v;
}

/// z-component of the planar cross product a x b.
template <typename T>
Interval<T> cross(const Vec2<T>& a, const Vec2<T>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename T>
Interval<T> norm(const Vec2<T>& a) {
  return sqrt(sqr(a.x()) + sqr(a.y()));
}

} // namespace tricert

namespace Eigen {

template <typename T>
struct NumTraits<tricert::Interval<T>> : GenericNumTraits<tricert::Interval<T>> {
  using Real = tricert::Interval<T>;
  using NonInteger = tricert::Interval<T>;
  using Literal = tricert::Interval<T>;
  using Nested = tricert::Interval<T>;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 4,
    MulCost = 8
  };
  static inline Real epsilon() { return Real(std::numeric_limits<double>::epsilon()); }
  static inline Real dummy_precision() { return Real(1e-12); }
  static inline int digits10() { return 15; }
};

template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<tricert::Interval<T>, double, BinaryOp> {
  using ReturnType = tricert::Interval<T>;
};
template <typename T, typename BinaryOp>
struct ScalarBinaryOpTraits<double, tricert::Interval<T>, BinaryOp> {
  using ReturnType = tricert::Interval<T>;
};

} // namespace Eigen
