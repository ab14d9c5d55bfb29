#include "oscillab/selftest.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "oscillab/experiments.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

namespace {

struct Check {
  const char* name;
  std::function<std::string()> run;  // empty string = pass, otherwise detail
};

std::string check_predictor_duality() {
  for (long long m = 0; m <= 4; ++m)
    for (long long n = 0; n <= 4; ++n)
      for (long long N = 0; N <= 4; ++N)
        for (long long s = 0; s <= N; ++s) {
          const DampingSpec a = damped_l2_exponents(m, n, N, s, Rat(1));
          const DampingSpec b = damped_l2_dual_exponents(m, n, N, s, Rat(1));
          if (a.gamma != b.gamma || a.re_z.has_value() != b.re_z.has_value() ||
              (a.re_z && *a.re_z != *b.re_z))
            return "primal/dual mismatch at m=" + std::to_string(m) + " n=" + std::to_string(n) +
                   " N=" + std::to_string(N) + " s=" + std::to_string(s);
        }
  return {};
}

std::string check_damping_to_lp_matching() {
  for (long long m = 0; m <= 3; ++m)
    for (long long n = 0; n <= 3; ++n)
      for (long long N = 0; N <= 3; ++N)
        for (long long s = 0; s <= N; ++s)
          for (long long eta = 1; eta <= 2; ++eta) {
            const LpPrediction lp = lp_from_damping(m, n, N, s, Rat(eta));
            const long long keff = m + s + 1;
            const long long leff = n + (N - s) * eta + 1;
            const SharpLpPrediction sharp = sharp_lp(keff, leff);
            if (lp.p != sharp.p || lp.delta != sharp.decay)
              return "lp_from_damping disagrees with the sharp table at m=" + std::to_string(m) +
                     " n=" + std::to_string(n) + " N=" + std::to_string(N) +
                     " s=" + std::to_string(s) + " eta=" + std::to_string(eta);
          }
  return {};
}

std::string check_sharp_lp_conjugates() {
  for (long long k = 1; k <= 6; ++k)
    for (long long l = 1; l <= 6; ++l) {
      const SharpLpPrediction a = sharp_lp(k, l);
      const SharpLpPrediction b = sharp_lp(l, k);
      // p(k,l) and p(l,k) are Holder conjugates
      if (Rat(1) / a.p + Rat(1) / b.p != Rat(1))
        return "conjugate exponent identity fails at k=" + std::to_string(k) +
               " l=" + std::to_string(l);
      if (a.decay != b.decay) return "decay symmetry fails";
    }
  return {};
}

std::string check_interpolation_chain() {
  for (long long m = 0; m <= 3; ++m)
    for (long long n = 0; n <= 3; ++n)
      for (long long N = 0; N <= 3; ++N)
        for (long long s = 0; s <= N; ++s)
          for (long long eta = 1; eta <= 2; ++eta) {
            const DampingSpec damp = damped_l2_exponents(m, n, N, s, Rat(eta));
            const Rat theta = interpolation_theta(m, n, N, s, Rat(eta));
            const LpPrediction lp = lp_from_damping(m, n, N, s, Rat(eta));
            // the damped L2 decay carried through the interpolation parameter
            // must land exactly on the undamped critical-exponent decay
            if (theta * damp.gamma != lp.delta)
              return "interpolated decay mismatch at m=" + std::to_string(m) +
                     " n=" + std::to_string(n) + " N=" + std::to_string(N) +
                     " s=" + std::to_string(s) + " eta=" + std::to_string(eta);
          }
  return {};
}

std::string check_factorization_roundtrip(std::uint64_t seed) {
  for (int trial = 0; trial < 200; ++trial) {
    SplitMix64 rng(mix_seed(seed, 0xfac70000ULL + trial));
    Factorization f;
    const int shape = static_cast<int>(rng.next() % 3);
    f.p = (shape == 0) ? 1 : (shape == 1) ? 2 : 3;
    f.q = (shape == 2) ? 2 : 1;
    f.m = static_cast<int>(rng.next() % 3);
    f.n = static_cast<int>(rng.next() % 3);
    f.c = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * rng.uniform(0.5, 2.0);
    const int n_real = static_cast<int>(rng.next() % 3);
    const int n_pairs = static_cast<int>(rng.next() % 3);
    if (n_real + n_pairs == 0) continue;
    auto magnitude = [&]() { return std::exp(std::log(1e-2) + rng.uniform01() * std::log(1e4)); };
    for (int i = 0; i < n_real; ++i) {
      const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
      f.roots.push_back(RootEntry{cd(sign * magnitude(), 0.0), 1});
    }
    for (int i = 0; i < n_pairs; ++i) {
      const double mag = magnitude();
      const double arg = rng.uniform(0.05, M_PI - 0.05);
      const cd z = std::polar(mag, arg);
      f.roots.push_back(RootEntry{z, 1});
      f.roots.push_back(RootEntry{std::conj(z), 1});
    }
    const WPoly poly = expand(f);
    const WeightSignature w = detect_weights(poly);
    const Factorization g = factorize(poly, w);
    const WPoly back = expand(g);
    double max_c = 0.0, max_err = 0.0;
    for (const Term& t : poly.terms()) max_c = std::max(max_c, std::abs(t.a));
    for (const Term& t : poly.terms()) {
      const Term* other = back.find(t.k, t.l);
      max_err = std::max(max_err, std::abs(t.a - (other ? other->a : 0.0)));
    }
    for (const Term& t : back.terms())
      if (!poly.find(t.k, t.l)) max_err = std::max(max_err, std::abs(t.a));
    if (max_err > 1e-8 * max_c)
      return "round-trip error " + format_double(max_err / max_c) + " at trial " +
             std::to_string(trial);
  }
  return {};
}

std::string check_partition_unity() {
  for (int t = 0; t < 1000; ++t) {
    const double x = std::exp2(-15.0 + 30.0 * t / 999.0);
    double sum = 0.0;
    for (int j = -20; j <= 20; ++j) sum += lp_phi(std::ldexp(x, -j));
    if (std::abs(sum - 1.0) > 1e-10)
      return "partition sum off by " + format_double(sum - 1.0) + " at x=" + format_double(x);
  }
  const DyadicPartition part = dyadic_partition(-3, 3);
  for (int t = 0; t < 200; ++t) {
    const double x = std::exp2(-8.0 + 16.0 * t / 199.0);
    double total = part.low_tail(x) + part.high_tail(x);
    for (int j = part.j_min; j <= part.j_max; ++j) total += part.piece(x, j);
    if (std::abs(total - 1.0) > 1e-12)
      return "telescoped tails leave gap " + format_double(total - 1.0);
  }
  return {};
}

std::string check_rank_one_holder() {
  const int n = 64;
  const double dx = 1.0 / n, dy = 1.0 / n;
  std::vector<double> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * dx;
    u[i] = 1.0 + x * x;
    v[i] = 2.0 - x;
  }
  std::vector<cd> entries(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) entries[static_cast<size_t>(i) * n + j] = u[i] * v[j] * dy;
  const KernelMatrix K = KernelMatrix::from_dense(std::move(entries), n, n, dx, dy);
  for (const Rat& p : {Rat(3, 2), Rat(2), Rat(3)}) {
    const double pd = to_double(p);
    const double qd = pd / (pd - 1.0);
    double nu = 0.0, nv = 0.0;
    for (int i = 0; i < n; ++i) {
      nu += std::pow(u[i], pd) * dx;
      nv += std::pow(v[i], qd) * dy;
    }
    const double expected = std::pow(nu, 1.0 / pd) * std::pow(nv, 1.0 / qd);
    const double got = opnorm_lp_lower(K, p, LpLowerOptions{.restarts = 2});
    if (std::abs(got - expected) > 1e-6 * expected)
      return "rank-1 norm off at p=" + rat_string(p) + ": got " + format_double(got) +
             " want " + format_double(expected);
  }
  return {};
}

std::string check_fit_slope() {
  const FitResult fit = fit_slope({{0, 0}, {1, -0.4}, {2, -1.1}, {3, -1.5}});
  if (std::abs(fit.slope + 0.52) > 1e-12) return "slope " + format_double(fit.slope);
  if (std::abs(fit.intercept - 0.03) > 1e-12) return "intercept " + format_double(fit.intercept);
  if (std::abs(fit.r2 - (1.0 - 0.018 / 1.37)) > 1e-12) return "r2 " + format_double(fit.r2);
  return {};
}

}  // namespace

bool run_selftest(std::ostream& out, unsigned long long seed) {
  const Check checks[] = {
      {"predictor_duality", check_predictor_duality},
      {"damping_lp_matching", check_damping_to_lp_matching},
      {"sharp_lp_conjugates", check_sharp_lp_conjugates},
      {"interpolation_chain", check_interpolation_chain},
      {"factorization_roundtrip", [seed] { return check_factorization_roundtrip(seed); }},
      {"partition_unity", check_partition_unity},
      {"rank_one_holder", check_rank_one_holder},
      {"fit_slope_oracle", check_fit_slope},
  };
  bool ok = true;
  for (const Check& c : checks) {
    std::string detail;
    try {
      detail = c.run();
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (detail.empty()) {
      out << "ok " << c.name << "\n";
    } else {
      out << "FAIL " << c.name << ": " << detail << "\n";
      ok = false;
    }
  }
  return ok;
}

}  // namespace oscillab
