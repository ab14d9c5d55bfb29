#include "oscillab/opnorm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "oscillab/util.hpp"

namespace oscillab {

namespace {

double norm2(const std::vector<cd>& v) {
  double s = 0.0;
  for (cd z : v) s += std::norm(z);
  return std::sqrt(s);
}

double norm_p(const std::vector<cd>& v, double p) {
  double s = 0.0;
  for (cd z : v) s += std::pow(std::abs(z), p);
  return std::pow(s, 1.0 / p);
}

// psi_p(v)_i = v_i |v_i|^(p-2): maps a unit l^p vector to a unit l^{p'} vector
// aligned with it. Call on normalized input only (negative powers otherwise
// overflow on tiny entries).
void dual_sign(std::vector<cd>& v, double p) {
  for (cd& z : v) {
    const double a = std::abs(z);
    z = (a == 0.0) ? cd(0.0, 0.0) : z * std::pow(a, p - 2.0);
  }
}

std::vector<cd> random_unit(int n, SplitMix64& rng, double p) {
  std::vector<cd> v(n);
  for (cd& z : v) z = cd(rng.normal(), rng.normal());
  const double nrm = norm_p(v, p);
  for (cd& z : v) z /= nrm;
  return v;
}

}  // namespace

NormBracket opnorm_l2(const KernelMatrix& K, const L2Options& opts) {
  const int r = K.rows(), c = K.cols();
  const double s2 = std::sqrt(K.dx() / K.dy());
  NormBracket out;
  out.p = Rat(2);

  if (!opts.force_power && K.is_dense() && std::min(r, c) <= 512) {
    // Gram matrix on the smaller side, then a dense Hermitian eigensolve.
    const int n = std::min(r, c);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(n, n);
    if (c <= r) {
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) {
          const cd kij = std::conj(K.entry(i, j));
          for (int l = j; l < c; ++l) B(j, l) += kij * K.entry(i, l);
        }
    } else {
      for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) {
          const cd kij = K.entry(i, j);
          for (int l = i; l < r; ++l) B(i, l) += kij * std::conj(K.entry(l, j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B.selfadjointView<Eigen::Upper>());
    const double top = std::max(0.0, es.eigenvalues().maxCoeff());
    const double sigma = s2 * std::sqrt(top);
    out.lower = sigma * (1.0 - 2.5e-7);
    out.upper = sigma * (1.0 + 2.5e-7);
    out.method = "dense_spectral";
    return out;
  }

  SplitMix64 rng(mix_seed(opts.seed, 0x6f70326cULL));
  std::vector<cd> v = random_unit(c, rng, 2.0);
  std::vector<cd> w(r), u(c);
  double est = 0.0, prev = 0.0, residual = 0.0;
  int redraws = 0;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    K.apply(v.data(), w.data());
    const double nw = norm2(w);
    if (nw == 0.0) {
      if (++redraws > 3) {
        out.lower = 0.0;
        out.upper = 0.0;
        out.method = "power_iteration";
        out.iterations = it;
        return out;  // numerically the zero operator
      }
      v = random_unit(c, rng, 2.0);
      continue;
    }
    est = s2 * nw;
    K.apply_adjoint(w.data(), u.data());  // u = K^H K v, so s2^2 u = B v
    double res_sq = 0.0;
    const double est_sq = est * est;
    for (int j = 0; j < c; ++j) res_sq += std::norm(s2 * s2 * u[j] - est_sq * v[j]);
    residual = std::sqrt(res_sq) / est_sq;
    if (it >= 2 && std::abs(est - prev) <= opts.tol * est) {
      out.lower = est;
      out.upper = est * (1.0 + opts.tol);
      out.method = "power_iteration";
      out.iterations = it;
      out.residual = residual;
      return out;
    }
    prev = est;
    const double nu = norm2(u);
    if (nu == 0.0) break;
    for (int j = 0; j < c; ++j) v[j] = u[j] / nu;
  }
  NormBracket best;
  best.p = Rat(2);
  best.lower = est;
  best.upper = est * (1.0 + std::max(opts.tol, est > 0.0 ? std::abs(est - prev) / est : 1.0));
  best.method = "power_iteration";
  best.iterations = opts.max_iterations;
  best.residual = residual;
  best.converged = false;
  throw NoConvergenceError("power iteration did not stabilize within " +
                               std::to_string(opts.max_iterations) + " iterations",
                           best);
}

double opnorm_lp_lower(const KernelMatrix& K, const Rat& p, const LpLowerOptions& opts) {
  if (p <= Rat(1)) raise(errc::invalid_argument, "dual-signing iteration needs 1 < p < infinity");
  const double pd = to_double(p);
  const double qd = pd / (pd - 1.0);
  const int r = K.rows(), c = K.cols();
  const double s = std::pow(K.dx(), 1.0 / pd) * std::pow(K.dy(), -1.0 / pd);

  double best = 0.0;
  std::vector<cd> x(c), y(r), z(c);
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    SplitMix64 rng(mix_seed(opts.seed, 0x4c70ULL + restart));
    if (restart == 0) {
      // all-ones start: near-extremal for the nonnegative kernels that dominate
      // the diagnostic uses of this routine
      x.assign(c, cd(1.0, 0.0));
      const double nrm = norm_p(x, pd);
      for (cd& v : x) v /= nrm;
    } else {
      x = random_unit(c, rng, pd);
    }
    double prev = 0.0;
    int flat = 0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      K.apply(x.data(), y.data());
      for (cd& v : y) v *= s;
      const double est = norm_p(y, pd);
      best = std::max(best, est);
      if (est == 0.0) break;
      for (cd& v : y) v /= est;
      dual_sign(y, pd);  // now a unit l^{q} functional aligned with Ax
      K.apply_adjoint(y.data(), z.data());
      for (cd& v : z) v *= s;
      const double nz = norm_p(z, qd);
      double inner = 0.0;
      for (int j = 0; j < c; ++j) inner += (std::conj(z[j]) * x[j]).real();
      if (nz <= inner * (1.0 + 1e-10)) break;  // stationary point of the dual pairing
      if (nz == 0.0) break;
      for (cd& v : z) v /= nz;
      dual_sign(z, qd);
      const double nx = norm_p(z, pd);
      if (nx == 0.0) break;
      for (int j = 0; j < c; ++j) x[j] = z[j] / nx;
      if (est - prev <= 1e-11 * est) {
        if (++flat >= 2) break;
      } else {
        flat = 0;
      }
      prev = est;
    }
  }
  return best;
}

UpperBreakdown opnorm_lp_upper_detail(const KernelMatrix& K, const Rat& p, std::uint64_t seed) {
  if (p < Rat(1)) raise(errc::invalid_argument, "interpolation chain needs p >= 1");
  UpperBreakdown out;
  out.n_one = (K.dx() / K.dy()) * K.max_abs_col_sum();
  out.n_inf = K.max_abs_row_sum();
  if (p == Rat(1)) {
    out.value = out.chain_endpoint = out.chain_l2 = out.n_one;
    return out;
  }
  const Rat inv_p = Rat(1) / p;
  const double t = to_double(inv_p);  // exponent on the L1 endpoint
  out.chain_endpoint = std::pow(out.n_one, t) * std::pow(out.n_inf, 1.0 - t);
  try {
    out.n_two = opnorm_l2(K, L2Options{.seed = seed}).upper;
  } catch (const NoConvergenceError& e) {
    out.n_two = e.best.upper;
  }
  if (p <= Rat(2)) {
    const double theta = to_double(Rat(2) * (p - 1) / p);  // L1 -- L2 segment
    out.chain_l2 = std::pow(out.n_one, 1.0 - theta) * std::pow(out.n_two, theta);
  } else {
    const double theta = to_double(Rat(1) - Rat(2) / p);  // L2 -- Linf segment
    out.chain_l2 = std::pow(out.n_two, 1.0 - theta) * std::pow(out.n_inf, theta);
  }
  out.value = std::min(out.chain_endpoint, out.chain_l2);
  return out;
}

double opnorm_lp_upper(const KernelMatrix& K, const Rat& p, std::uint64_t seed) {
  return opnorm_lp_upper_detail(K, p, seed).value;
}

double schur_bound(const KernelMatrix& K) {
  const double row = K.max_abs_row_sum();
  const double col = (K.dx() / K.dy()) * K.max_abs_col_sum();
  return std::sqrt(row * col);
}

NormBracket norm_bracket(const KernelMatrix& K, const Rat& p, std::uint64_t seed, int restarts) {
  if (p == Rat(2)) return opnorm_l2(K, L2Options{.seed = seed});
  NormBracket out;
  out.p = p;
  out.lower = opnorm_lp_lower(K, p, LpLowerOptions{.restarts = restarts, .seed = seed});
  out.upper = std::max(opnorm_lp_upper(K, p, seed), out.lower);
  out.method = "dual_signing+interpolation_chain";
  return out;
}

}  // namespace oscillab
