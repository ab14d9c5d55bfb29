#include "oscillab/predict.hpp"

#include <string>

#include "oscillab/errors.hpp"

namespace oscillab {

SharpLpPrediction sharp_lp(long long k, long long l) {
  if (k < 1 || l < 1) raise(errc::invalid_argument, "sharp_lp requires k, l >= 1");
  SharpLpPrediction out;
  out.p = Rat(k + l, k);
  out.decay = Rat(1, k + l);
  out.coeff_power = Rat(-1, k + l);
  return out;
}

DampingSpec damped_l2_exponents(long long m, long long n, long long N, long long s,
                                const Rat& eta) {
  if (m < 0 || n < 0 || N < 0) raise(errc::invalid_argument, "exponents must be non-negative");
  if (s < 0 || s > N) raise(errc::invalid_argument, "damping order must satisfy 0 <= s <= N");
  if (eta < Rat(1)) raise(errc::invalid_argument, "weight ratio must be >= 1");
  DampingSpec out;
  out.m = m;
  out.n = n;
  out.order = N;
  out.s = s;
  out.weight_ratio = eta;
  const Rat W = Rat(n) + Rat(N - s) * eta;  // effective y-side multiplicity
  out.gamma = Rat(1) / (Rat(2) * (W + 1));
  if (m + s == 0) {
    out.re_z.reset();  // the Re(z) denominator vanishes; gamma alone survives
  } else {
    out.re_z = (Rat(m + s) - W) / (Rat(2) * (W + 1) * Rat(m + s));
  }
  return out;
}

DampingSpec damped_l2_dual_exponents(long long m, long long n, long long M, long long s,
                                     const Rat& nu) {
  if (m < 0 || n < 0 || M < 0) raise(errc::invalid_argument, "exponents must be non-negative");
  if (s < 0 || s > M) raise(errc::invalid_argument, "damping order must satisfy 0 <= s <= M");
  if (nu < Rat(1)) raise(errc::invalid_argument, "weight ratio must be >= 1");
  DampingSpec out;
  out.m = m;
  out.n = n;
  out.order = M;
  out.s = s;
  out.weight_ratio = nu;
  out.dual = true;
  const Rat W = Rat(n + M - s);
  out.gamma = Rat(1) / (Rat(2) * (W + 1));
  const Rat V = Rat(m) + Rat(s) * nu;  // damped x-side multiplicity
  if (V == Rat(0)) {
    out.re_z.reset();
  } else {
    out.re_z = (V - W) / (Rat(2) * (W + 1) * V);
  }
  return out;
}

WeightInterpolation interpolate_weights(const Rat& a, const Rat& p0, const Rat& theta) {
  if (p0 <= Rat(1)) raise(errc::invalid_argument, "interpolation endpoint requires p0 > 1");
  if (theta <= Rat(0) || theta >= Rat(1))
    raise(errc::invalid_argument, "interpolation parameter must lie in (0,1)");
  if (a == Rat(-1) / p0)
    raise(errc::forbidden_exponent,
          "damping power a = -1/p0 collapses the interpolated weight");
  WeightInterpolation out;
  out.gamma = -(Rat(1) - theta) + theta * a;
  const Rat inv_p = (Rat(1) - theta) + theta / p0;
  out.p = Rat(1) / inv_p;
  return out;
}

LpPrediction lp_from_damping(long long m, long long n, long long N, long long s, const Rat& eta) {
  if (m < 0 || n < 0 || N < 0) raise(errc::invalid_argument, "exponents must be non-negative");
  if (s < 0 || s > N) raise(errc::invalid_argument, "damping order must satisfy 0 <= s <= N");
  if (eta < Rat(1)) raise(errc::invalid_argument, "weight ratio must be >= 1");
  const Rat W = Rat(n) + Rat(N - s) * eta;
  const Rat total = Rat(m + s) + W + 2;
  LpPrediction out;
  out.delta = Rat(1) / total;
  out.p = total / Rat(m + s + 1);
  return out;
}

Rat interpolation_theta(long long m, long long n, long long N, long long s, const Rat& eta) {
  if (s < 0 || s > N) raise(errc::invalid_argument, "damping order must satisfy 0 <= s <= N");
  const Rat W = Rat(n) + Rat(N - s) * eta;
  return Rat(2) * (W + 1) / (Rat(m + s) + W + 2);
}

HigherDimPrediction higher_dim_prediction(long long k_i, long long l_i, long long m, long long n,
                                          long long nX, long long nY) {
  if (k_i < 1 || l_i < 1) raise(errc::invalid_argument, "term exponents must be >= 1");
  if (nX < 1 || nY < 1) raise(errc::invalid_argument, "dimensions must be >= 1");
  if (m < nX || n < nY)
    raise(errc::hypothesis_violated,
          "radial homogeneity requires m >= nX and n >= nY (got m=" + std::to_string(m) +
              ", nX=" + std::to_string(nX) + ", n=" + std::to_string(n) +
              ", nY=" + std::to_string(nY) + ")");
  const Rat A = Rat(k_i * m, nX);
  const Rat B = Rat(l_i * n, nY);
  HigherDimPrediction out;
  out.p = (A + B) / A;
  out.gamma = Rat(1) / (A + B);
  return out;
}

LpPrediction scaled_lp_eta(long long k, long long l, const Rat& eta1, const Rat& eta2) {
  if (k < 1 || l < 1) raise(errc::invalid_argument, "scaled_lp_eta requires k, l >= 1");
  if (eta1 <= Rat(0) || eta2 <= Rat(0))
    raise(errc::invalid_argument, "scaling exponents must be positive");
  const Rat A = Rat(k) * eta1;
  const Rat B = Rat(l) * eta2;
  LpPrediction out;
  out.p = (A + B) / A;
  out.delta = Rat(1) / (A + B);
  return out;
}

}  // namespace oscillab
