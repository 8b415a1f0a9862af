#ifndef FFBIAS_ERROR_HPP
#define FFBIAS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffbias {

// Failure classes surfaced by the library.  The CLI maps these onto exit
// codes: configuration/usage problems -> 2, resource limits and failed
// verifications -> 1.
enum class errc {
  not_prime,
  size_overflow,
  division_by_zero,
  mixed_fields,
  syntax_error,
  unknown_variable,
  coefficient_not_in_field,
  dimension_mismatch,
  zero_polynomial,
  budget_exceeded,
  not_homogeneous,
  divisibility_violation,
  identity_violation,
  no_completed_levels,
  degree_too_low,
  not_quadratic,
  characteristic_two,
  mismatched_variety,
  sandwich_violation,
  insufficient_levels,
  not_c_good,
  bound_violation,
  arithmetic_overflow,
  invalid_argument,
};

const char* errc_name(errc c) noexcept;

// True for errors that stem from bad user input rather than a failed
// computation or an exhausted resource.
bool is_usage_error(errc c) noexcept;

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& msg) {
  throw error(code, msg);
}

}  // namespace ffbias

#endif
