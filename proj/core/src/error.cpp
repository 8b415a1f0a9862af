#include "ffbias/error.hpp"

namespace ffbias {

const char* errc_name(errc c) noexcept {
  switch (c) {
    case errc::not_prime: return "NotPrime";
    case errc::size_overflow: return "SizeOverflow";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::mixed_fields: return "MixedFields";
    case errc::syntax_error: return "SyntaxError";
    case errc::unknown_variable: return "UnknownVariable";
    case errc::coefficient_not_in_field: return "CoefficientNotInField";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::zero_polynomial: return "ZeroPolynomial";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::not_homogeneous: return "NotHomogeneous";
    case errc::divisibility_violation: return "DivisibilityViolation";
    case errc::identity_violation: return "IdentityViolation";
    case errc::no_completed_levels: return "NoCompletedLevels";
    case errc::degree_too_low: return "DegreeTooLow";
    case errc::not_quadratic: return "NotQuadratic";
    case errc::characteristic_two: return "CharacteristicTwo";
    case errc::mismatched_variety: return "MismatchedVariety";
    case errc::sandwich_violation: return "SandwichViolation";
    case errc::insufficient_levels: return "InsufficientLevels";
    case errc::not_c_good: return "NotCGood";
    case errc::bound_violation: return "BoundViolation";
    case errc::arithmetic_overflow: return "ArithmeticOverflow";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

bool is_usage_error(errc c) noexcept {
  switch (c) {
    case errc::not_prime:
    case errc::size_overflow:
    case errc::syntax_error:
    case errc::unknown_variable:
    case errc::coefficient_not_in_field:
    case errc::dimension_mismatch:
    case errc::zero_polynomial:
    case errc::degree_too_low:
    case errc::not_quadratic:
    case errc::characteristic_two:
    case errc::invalid_argument:
      return true;
    default:
      return false;
  }
}

}  // namespace ffbias
