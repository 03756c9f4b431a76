#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tricert {

enum class ErrorCode {
  domain,
  precision_exhausted,
  order_overflow,
  parity,
  degenerate_triangle,
  sign_ambiguous,
  mode_mismatch,
  lemma_precondition,
  separation_failure,
  proximity_uncertified,
  nonpositive_input,
  charge_inside_domain,
  no_dip,
  segment_through_charge,
  nonconvergent_subdivision,
  sign_test_failure,
  faber_krahn_precondition,
  denominator_nonpositive,
  sign_undecided,
  precondition,
  overlap,
  gap_insufficient,
  incomplete_coverage,
  integrity,
  numeric_backend,
  usage,
  io,
};

std::string_view to_string(ErrorCode code);

/// The single exception type thrown by the library; `code()` identifies the
/// failed contract.
class CertError : public std::runtime_error {
public:
  CertError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw CertError(code, what); }

} // namespace tricert
