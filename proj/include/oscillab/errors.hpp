#pragma once

#include <stdexcept>
#include <string>

namespace oscillab {

// Failure taxonomy shared by every module. The CLI maps categories to process
// exit codes: configuration/parse problems -> 1, mathematical preconditions or
// convergence failures -> 2, filesystem problems -> 3.
enum class errc {
  // symbolic layer
  empty_polynomial,
  not_weighted_homogeneous,
  root_finding_failed,
  non_real_expansion,
  no_conjugate_invariant_selection,
  // exponent arithmetic
  division_by_zero,
  forbidden_exponent,
  hypothesis_violated,
  // numerics
  unsupported_kind,
  damping_singular,
  no_convergence,
  under_resolved_grid,
  // experiments
  degenerate_abscissae,
  interval_out_of_range,
  regime_violation,
  non_integrable_sphere_factor,
  // plumbing
  invalid_argument,
  parse_error,
  io_error,
};

const char* errc_name(errc c);
int errc_exit_code(errc c);

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace oscillab
