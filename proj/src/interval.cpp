#include "tricert/interval.hpp"

namespace tricert {

namespace {

// Enough bits that rounding the MPFR result outward to T loses nothing.
mpfr_prec_t transcendental_precision() { return BigFloat::default_precision() + 16; }

template <typename T>
Interval<T> from_mpfr(const BigFloat& lo, const BigFloat& hi) {
  return Interval<T>(Rounding<T>::from_big_down(lo), Rounding<T>::from_big_up(hi));
}

template <typename T, typename F>
Interval<T> monotone_increasing(const Interval<T>& x, F&& f) {
  using R = Rounding<T>;
  const BigFloat xl = R::to_big_down(x.lo()), xh = R::to_big_up(x.hi());
  BigFloat lo, hi;
  {
    PrecisionGuard guard(transcendental_precision());
    lo = BigFloat();
    hi = BigFloat();
    f(lo.get(), xl.get(), MPFR_RNDD);
    f(hi.get(), xh.get(), MPFR_RNDU);
  }
  return from_mpfr<T>(lo, hi);
}

} // namespace

template <typename T>
Interval<T> pi() {
  BigFloat lo, hi;
  {
    PrecisionGuard guard(transcendental_precision());
    lo = BigFloat();
    hi = BigFloat();
    mpfr_const_pi(lo.get(), MPFR_RNDD);
    mpfr_const_pi(hi.get(), MPFR_RNDU);
  }
  return from_mpfr<T>(lo, hi);
}

template <typename T>
Interval<T> euler_gamma() {
  BigFloat lo, hi;
  {
    PrecisionGuard guard(transcendental_precision());
    lo = BigFloat();
    hi = BigFloat();
    mpfr_const_euler(lo.get(), MPFR_RNDD);
    mpfr_const_euler(hi.get(), MPFR_RNDU);
  }
  return from_mpfr<T>(lo, hi);
}

template <typename T>
Interval<T> log(const Interval<T>& x) {
  if (!x.certainly_positive()) fail(ErrorCode::domain, "log of an interval touching zero");
  return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_log(r, a, rnd); });
}

template <typename T>
Interval<T> exp(const Interval<T>& x) {
  return monotone_increasing(x, [](mpfr_ptr r, mpfr_srcptr a, mpfr_rnd_t rnd) { mpfr_exp(r, a, rnd); });
}

template Interval<double> pi<double>();
template Interval<BigFloat> pi<BigFloat>();
template Interval<double> euler_gamma<double>();
template Interval<BigFloat> euler_gamma<BigFloat>();
template Interval<double> log<double>(const Interval<double>&);
template Interval<BigFloat> log<BigFloat>(const Interval<BigFloat>&);
template Interval<double> exp<double>(const Interval<double>&);
template Interval<BigFloat> exp<BigFloat>(const Interval<BigFloat>&);

} // namespace tricert
