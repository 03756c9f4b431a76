#pragma once

// Independent reference values from MPFR's own special functions, used to
// check enclosures computed by the library's series code.

#include "tricert/interval.hpp"

#include <mpfr.h>

namespace oracle {

enum class Fn { j0, j1, y0, y1 };

inline tricert::BigFloat eval(Fn fn, double x, mpfr_prec_t prec = 300) {
  tricert::PrecisionGuard guard(prec);
  tricert::BigFloat xb(x), r;
  switch (fn) {
  case Fn::j0: mpfr_j0(r.get(), xb.get(), MPFR_RNDN); break;
  case Fn::j1: mpfr_j1(r.get(), xb.get(), MPFR_RNDN); break;
  case Fn::y0: mpfr_y0(r.get(), xb.get(), MPFR_RNDN); break;
  case Fn::y1: mpfr_y1(r.get(), xb.get(), MPFR_RNDN); break;
  }
  return r;
}

inline tricert::BigFloat jn(int n, double x, mpfr_prec_t prec = 300) {
  tricert::PrecisionGuard guard(prec);
  tricert::BigFloat xb(x), r;
  mpfr_jn(r.get(), n, xb.get(), MPFR_RNDN);
  return r;
}

inline tricert::BigFloat yn(int n, double x, mpfr_prec_t prec = 300) {
  tricert::PrecisionGuard guard(prec);
  tricert::BigFloat xb(x), r;
  mpfr_yn(r.get(), n, xb.get(), MPFR_RNDN);
  return r;
}

// The reference carries 300 bits, far below any enclosure width checked here.
template <typename T>
bool contains(const tricert::Interval<T>& x, const tricert::BigFloat& ref) {
  tricert::PrecisionGuard guard(ref.precision());
  tricert::BigFloat lo = tricert::Rounding<T>::to_big_down(x.lo());
  tricert::BigFloat hi = tricert::Rounding<T>::to_big_up(x.hi());
  return lo <= ref && ref <= hi;
}

} // namespace oracle
