#pragma once

#include <cstdint>
#include <string>

#include "oscillab/errors.hpp"
#include "oscillab/kernel.hpp"
#include "oscillab/rational.hpp"

namespace oscillab {

// Certified two-sided estimate of a discrete L^p -> L^p operator norm. All
// norms use the quadrature measure: ||f||_p = (sum |f_j|^p dy)^(1/p) on the
// input side and dx on the output side.
struct NormBracket {
  double lower = 0.0;
  double upper = 0.0;
  Rat p{2};
  std::string method;
  int iterations = 0;
  double residual = 0.0;  // ||K*K v - est^2 v|| / est^2 at the accepted vector
  bool converged = true;
};

class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, NormBracket best_so_far)
      : Error(errc::no_convergence, what), best(std::move(best_so_far)) {}
  NormBracket best;
};

struct L2Options {
  double tol = 1e-6;
  int max_iterations = 2000;
  std::uint64_t seed = 0;
  bool force_power = false;  // bypass the small-matrix spectral path (oracle tests)
};

// Largest singular value: dense spectral solve when the smaller dimension is
// at most 512 (and the matrix is materialized), power iteration on K*K
// otherwise. The lower edge is always a true Rayleigh estimate.
NormBracket opnorm_l2(const KernelMatrix& K, const L2Options& opts = {});

struct LpLowerOptions {
  int restarts = 8;
  int max_iterations = 400;
  std::uint64_t seed = 0;
};

// Dual-signing fixed-point iteration; returns a guaranteed lower bound on the
// discrete norm, maximized over restarts. Requires 1 < p < infinity.
double opnorm_lp_lower(const KernelMatrix& K, const Rat& p, const LpLowerOptions& opts = {});

struct UpperBreakdown {
  double n_one = 0.0;      // L1 -> L1 norm (max column mass)
  double n_inf = 0.0;      // Linf -> Linf norm (max row mass)
  double n_two = 0.0;      // certified L2 upper edge
  double chain_endpoint = 0.0;  // interpolation of the L1 and Linf endpoints
  double chain_l2 = 0.0;        // interpolation through the L2 bound
  double value = 0.0;
};

// Rigorous upper bound by interpolating the exactly computable endpoint norms,
// optionally routed through the certified L2 bound. Requires p >= 1.
double opnorm_lp_upper(const KernelMatrix& K, const Rat& p, std::uint64_t seed = 0);
UpperBreakdown opnorm_lp_upper_detail(const KernelMatrix& K, const Rat& p, std::uint64_t seed = 0);

// sqrt of (max row mass) * (max column mass): the classical Schur test bound,
// always an upper bound for the L2 norm.
double schur_bound(const KernelMatrix& K);

// Dispatch: p = 2 -> opnorm_l2, otherwise dual-signing lower + chain upper.
NormBracket norm_bracket(const KernelMatrix& K, const Rat& p, std::uint64_t seed = 0,
                         int restarts = 8);

}  // namespace oscillab
