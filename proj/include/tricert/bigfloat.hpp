#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace tricert {

/// Owning wrapper around an MPFR float. New values take the calling thread's
/// default precision (see PrecisionGuard).
class BigFloat {
public:
  BigFloat() { mpfr_init2(value_, default_precision()); mpfr_set_zero(value_, 1); }
  BigFloat(double v) { mpfr_init2(value_, default_precision()); mpfr_set_d(value_, v, MPFR_RNDN); }
  BigFloat(double v, mpfr_rnd_t rnd) {
    mpfr_init2(value_, default_precision());
    mpfr_set_d(value_, v, rnd);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    value_[0] = other.value_[0];
    other.value_[0]._mpfr_d = nullptr;
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      if (value_[0]._mpfr_d == nullptr) mpfr_init2(value_, mpfr_get_prec(other.value_));
      else mpfr_set_prec(value_, mpfr_get_prec(other.value_));
      mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    std::swap(value_[0], other.value_[0]);
    return *this;
  }
  ~BigFloat() {
    if (value_[0]._mpfr_d != nullptr) mpfr_clear(value_);
  }

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }

  mpfr_prec_t precision() const { return mpfr_get_prec(value_); }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  bool is_nan() const { return mpfr_nan_p(value_) != 0; }
  bool is_inf() const { return mpfr_inf_p(value_) != 0; }
  bool is_zero() const { return mpfr_zero_p(value_) != 0; }
  int sign() const { return mpfr_sgn(value_); }

  /// Decimal string with `digits` significant digits rounded in direction `rnd`.
  std::string to_string(int digits, mpfr_rnd_t rnd) const;
  static BigFloat from_string(const std::string& text, mpfr_rnd_t rnd);

  static mpfr_prec_t default_precision();
  static void set_default_precision(mpfr_prec_t bits);

private:
  mpfr_t value_;
};

inline bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
inline bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
inline bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
inline bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
inline bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
inline bool operator!=(const BigFloat& a, const BigFloat& b) { return !(a == b); }

/// Scoped override of the thread's default BigFloat precision.
class PrecisionGuard {
public:
  explicit PrecisionGuard(mpfr_prec_t bits) : saved_(BigFloat::default_precision()) {
    BigFloat::set_default_precision(bits);
  }
  ~PrecisionGuard() { BigFloat::set_default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
  mpfr_prec_t saved_;
};

} // namespace tricert
