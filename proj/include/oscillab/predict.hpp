#pragma once

#include <optional>

#include "oscillab/rational.hpp"

namespace oscillab {

// All predictions are exact rational arithmetic; callers project to double
// only at the numeric boundary.

struct SharpLpPrediction {
  Rat p;            // critical Lebesgue exponent (k+l)/k
  Rat decay;        // norm decay 1/(k+l) in lambda
  Rat coeff_power;  // power of the designated coefficient, -1/(k+l)
};
// Requires k, l >= 1.
SharpLpPrediction sharp_lp(long long k, long long l);

struct DampingSpec {
  long long m = 0, n = 0, order = 0, s = 0;  // order = N (primal) or M (dual)
  Rat weight_ratio;                          // eta (primal) or nu (dual)
  bool dual = false;
  Rat gamma;                 // L2 decay exponent
  std::optional<Rat> re_z;   // absent exactly when the denominator m+s vanishes
};
// Requires 0 <= s <= N and eta >= 1.
DampingSpec damped_l2_exponents(long long m, long long n, long long N, long long s, const Rat& eta);
// Dual orientation: requires 0 <= s <= M and nu >= 1.
DampingSpec damped_l2_dual_exponents(long long m, long long n, long long M, long long s,
                                     const Rat& nu);

struct WeightInterpolation {
  Rat gamma;
  Rat p;
};
// Interpolates a damping power a at L^{p0} against -1 at L^2-type endpoint:
// requires p0 > 1 and theta in (0,1); raises ForbiddenExponent when a = -1/p0.
WeightInterpolation interpolate_weights(const Rat& a, const Rat& p0, const Rat& theta);

struct LpPrediction {
  Rat p;
  Rat delta;  // decay exponent at the critical p
};
LpPrediction lp_from_damping(long long m, long long n, long long N, long long s, const Rat& eta);
// Interpolation parameter used to pass from the damped L2 estimate to the
// undamped Lp estimate.
Rat interpolation_theta(long long m, long long n, long long N, long long s, const Rat& eta);

struct HigherDimPrediction {
  Rat p;
  Rat gamma;
};
// Radial model in dimensions (nX, nY); requires m >= nX and n >= nY.
HigherDimPrediction higher_dim_prediction(long long k_i, long long l_i, long long m, long long n,
                                          long long nX, long long nY);

LpPrediction scaled_lp_eta(long long k, long long l, const Rat& eta1, const Rat& eta2);

}  // namespace oscillab
