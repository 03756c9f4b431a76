#include "tricert/bigfloat.hpp"
#include "tricert/errors.hpp"

#include <cstdlib>

namespace tricert {

namespace {
thread_local mpfr_prec_t g_precision = 256;
}

mpfr_prec_t BigFloat::default_precision() { return g_precision; }

void BigFloat::set_default_precision(mpfr_prec_t bits) {
  if (bits < MPFR_PREC_MIN || bits > 1 << 20) fail(ErrorCode::precision_exhausted, "unsupported precision");
  g_precision = bits;
}

std::string BigFloat::to_string(int digits, mpfr_rnd_t rnd) const {
  if (is_nan()) return "nan";
  if (is_inf()) return sign() > 0 ? "inf" : "-inf";
  char* buffer = nullptr;
  const char* format = rnd == MPFR_RNDD ? "%.*RDe" : (rnd == MPFR_RNDU ? "%.*RUe" : "%.*RNe");
  mpfr_asprintf(&buffer, format, digits - 1, value_);
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

BigFloat BigFloat::from_string(const std::string& text, mpfr_rnd_t rnd) {
  BigFloat r;
  if (text == "inf" || text == "+inf") { mpfr_set_inf(r.get(), 1); return r; }
  if (text == "-inf") { mpfr_set_inf(r.get(), -1); return r; }
  if (mpfr_set_str(r.get(), text.c_str(), 10, rnd) != 0) fail(ErrorCode::io, "malformed decimal '" + text + "'");
  return r;
}

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::domain: return "domain error";
    case ErrorCode::precision_exhausted: return "precision exhausted";
    case ErrorCode::order_overflow: return "order overflow";
    case ErrorCode::parity: return "parity error";
    case ErrorCode::degenerate_triangle: return "degenerate triangle";
    case ErrorCode::sign_ambiguous: return "sign ambiguous";
    case ErrorCode::mode_mismatch: return "mode mismatch";
    case ErrorCode::lemma_precondition: return "lemma precondition violated";
    case ErrorCode::separation_failure: return "separation failure";
    case ErrorCode::proximity_uncertified: return "proximity uncertified";
    case ErrorCode::nonpositive_input: return "nonpositive input";
    case ErrorCode::charge_inside_domain: return "charge inside domain";
    case ErrorCode::no_dip: return "no dip";
    case ErrorCode::segment_through_charge: return "segment through charge";
    case ErrorCode::nonconvergent_subdivision: return "nonconvergent subdivision";
    case ErrorCode::sign_test_failure: return "sign test failure";
    case ErrorCode::faber_krahn_precondition: return "Faber-Krahn precondition violated";
    case ErrorCode::denominator_nonpositive: return "denominator nonpositive";
    case ErrorCode::sign_undecided: return "sign undecided";
    case ErrorCode::precondition: return "precondition violated";
    case ErrorCode::overlap: return "overlap";
    case ErrorCode::gap_insufficient: return "gap insufficient";
    case ErrorCode::incomplete_coverage: return "incomplete coverage";
    case ErrorCode::integrity: return "integrity error";
    case ErrorCode::numeric_backend: return "numeric backend failure";
    case ErrorCode::usage: return "usage error";
    case ErrorCode::io: return "i/o error";
  }
  return "error";
}

} // namespace tricert
