#include "oscillab/errors.hpp"

namespace oscillab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_polynomial: return "EmptyPolynomial";
    case errc::not_weighted_homogeneous: return "NotWeightedHomogeneous";
    case errc::root_finding_failed: return "RootFindingFailed";
    case errc::non_real_expansion: return "NonRealExpansion";
    case errc::no_conjugate_invariant_selection: return "NoConjugateInvariantSelection";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::forbidden_exponent: return "ForbiddenExponent";
    case errc::hypothesis_violated: return "HypothesisViolated";
    case errc::unsupported_kind: return "UnsupportedKind";
    case errc::damping_singular: return "DampingSingular";
    case errc::no_convergence: return "NoConvergence";
    case errc::under_resolved_grid: return "UnderResolvedGrid";
    case errc::degenerate_abscissae: return "DegenerateAbscissae";
    case errc::interval_out_of_range: return "IntervalOutOfRange";
    case errc::regime_violation: return "RegimeViolation";
    case errc::non_integrable_sphere_factor: return "NonIntegrableSphereFactor";
    case errc::invalid_argument: return "InvalidArgument";
    case errc::parse_error: return "ParseError";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

int errc_exit_code(errc c) {
  switch (c) {
    case errc::parse_error:
      return 1;
    case errc::io_error:
      return 3;
    default:
      return 2;  // mathematical precondition / convergence failures
  }
}

}  // namespace oscillab
