#pragma once

#include "tricert/taylor.hpp"

#include <vector>

namespace tricert {

enum class BesselKind { first, second };

/// Enclosure of J_n(x) (first) or Y_n(x) (second) over every point of x.
/// The second kind needs x > 0.
template <typename T>
Interval<T> bessel(BesselKind kind, int order, const Interval<T>& x);

/// F_n(w) = sum_m (-w)^m / (m! (n+m)!), so that J_n(z) = (z/2)^n F_n(z^2/4).
template <typename T>
Interval<T> bessel_entire(int order, const Interval<T>& w);

/// Orders 0..top in one pass, each valid over every point of x.
template <typename T>
std::vector<Interval<T>> bessel_table(BesselKind kind, int top, const Interval<T>& x);

/// F_0..F_top over every point of w.
template <typename T>
std::vector<Interval<T>> bessel_entire_table(int top, const Interval<T>& w);

/// Taylor coefficients f^{(k)}(z)/k!, k = 0..m, of f = J_n or Y_n, valid for
/// every point of z. Built from J'_n = (J_{n-1} - J_{n+1})/2.
template <typename T>
std::vector<Interval<T>> bessel_derivative_series(BesselKind kind, int order, const Interval<T>& z, int m);

/// Coefficients of F_n(w0 + s): (-1)^k F_{n+k}(w0)/k!, k = 0..m.
template <typename T>
std::vector<Interval<T>> entire_derivative_series(int order, const Interval<T>& w, int m);

/// Bessel function composed with an inner jet.
template <typename T>
Jet<T> bessel_jet(BesselKind kind, int order, const Jet<T>& arg) {
  return compose(bessel_derivative_series(kind, order, arg[0], arg.order()), shift_powers(arg));
}

/// Composition of a Bessel function with a polynomial argument path given as
/// a Taylor model on t in [-1, 1] (its remainder must vanish). The result
/// has degree m.
template <typename T>
TaylorModel<T> bessel_taylor(BesselKind kind, int order, const TaylorModel<T>& path, int m = kDefaultTaylorDegree);

/// Jet of a polynomial p(t) = sum a_j t^j re-expanded about every base point
/// tau in `base`.
template <typename T>
Jet<T> polynomial_jet(const std::vector<Interval<T>>& coeffs, const Interval<T>& base, int order);

/// First positive zero of J_0, enclosed by certified sign changes.
IntervalD bessel_j0_first_zero();

} // namespace tricert
