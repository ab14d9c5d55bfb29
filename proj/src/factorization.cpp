#include "oscillab/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "oscillab/errors.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

namespace {

bool root_less(cd a, cd b) {
  const double ma = std::abs(a), mb = std::abs(b);
  if (ma != mb) return ma < mb;
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

constexpr double kPairTol = 1e-8;

}  // namespace

int Factorization::total_roots() const {
  int n = 0;
  for (const RootEntry& e : roots) n += e.multiplicity;
  return n;
}

std::vector<cd> Factorization::flattened() const {
  std::vector<cd> out;
  for (const RootEntry& e : roots)
    for (int i = 0; i < e.multiplicity; ++i) out.push_back(e.alpha);
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

std::vector<cd> Factorization::eta_roots() const {
  std::vector<cd> out;
  for (const RootEntry& e : roots) {
    const double mag = std::pow(std::abs(e.alpha), 1.0 / static_cast<double>(q));
    const double arg = std::arg(e.alpha);
    for (long long w = 0; w < q; ++w) {
      const double theta = (arg + 2.0 * M_PI * static_cast<double>(w)) / static_cast<double>(q);
      cd root = std::polar(mag, theta);
      if (std::abs(root.imag()) <= kPairTol * (1.0 + std::abs(root))) root = cd(root.real(), 0.0);
      for (int i = 0; i < e.multiplicity; ++i) out.push_back(root);
    }
  }
  std::sort(out.begin(), out.end(), root_less);
  return out;
}

Factorization factorize(const WPoly& poly, const WeightSignature& w) {
  const auto& terms = poly.terms();
  if (terms.empty()) raise(errc::empty_polynomial, "cannot factorize the zero polynomial");
  for (const Term& t : terms)
    if (w.p * t.k + w.q * t.l != w.D)
      raise(errc::not_weighted_homogeneous,
            poly.pretty() + " does not match the supplied weight signature");

  Factorization f;
  f.p = w.p;
  f.q = w.q;
  int min_k = terms[0].k, max_k = terms[0].k, min_l = terms[0].l;
  for (const Term& t : terms) {
    min_k = std::min(min_k, t.k);
    max_k = std::max(max_k, t.k);
    min_l = std::min(min_l, t.l);
  }
  f.m = min_k;
  f.n = min_l;

  // After pulling out x^m y^n the survivor is a polynomial in u = x^q, v = y^p:
  // both extreme terms exist, so every reduced x-exponent is a multiple of q.
  if ((max_k - min_k) % w.q != 0)
    raise(errc::not_weighted_homogeneous, "x-exponent spread incompatible with weights");
  const int deg = static_cast<int>((max_k - min_k) / w.q);
  std::vector<double> coeff(deg + 1, 0.0);
  for (const Term& t : terms) {
    if ((t.k - min_k) % w.q != 0)
      raise(errc::not_weighted_homogeneous, "x-exponent stride incompatible with weights");
    coeff[(t.k - min_k) / w.q] += t.a;
  }
  f.c = coeff[deg];
  if (deg == 0) return f;

  std::vector<cd> roots = real_poly_roots(coeff);

  // residual contract on the raw roots
  double max_coeff = 0.0;
  for (double v : coeff) max_coeff = std::max(max_coeff, std::abs(v));
  for (cd z : roots) {
    cd acc = 0.0;
    for (size_t i = coeff.size(); i-- > 0;) acc = acc * z + coeff[i];
    const double bound = 1e-10 * max_coeff * std::pow(1.0 + std::abs(z), deg);
    if (!(std::abs(acc) <= bound))
      raise(errc::root_finding_failed,
            "root residual " + format_double(std::abs(acc)) + " exceeds contract for " +
                poly.pretty());
  }

  // snap near-real roots, then pair the rest into exact conjugates
  for (cd& z : roots)
    if (std::abs(z.imag()) <= kPairTol * (1.0 + std::abs(z))) z = cd(z.real(), 0.0);

  std::vector<cd> canonical;
  std::vector<cd> upper, lower;
  for (cd z : roots) {
    if (z.imag() == 0.0)
      canonical.push_back(z);
    else if (z.imag() > 0.0)
      upper.push_back(z);
    else
      lower.push_back(z);
  }
  std::vector<bool> used(lower.size(), false);
  for (cd z : upper) {
    size_t best = lower.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < lower.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(z - std::conj(lower[i]));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    if (best == lower.size() || best_d > kPairTol * (1.0 + std::abs(z)))
      raise(errc::root_finding_failed, "conjugate pairing failed for " + poly.pretty());
    used[best] = true;
    const cd rep = (z + std::conj(lower[best])) * 0.5;
    canonical.push_back(rep);
    canonical.push_back(std::conj(rep));
  }
  for (size_t i = 0; i < lower.size(); ++i)
    if (!used[i]) raise(errc::root_finding_failed, "unpaired complex root for " + poly.pretty());

  std::sort(canonical.begin(), canonical.end(), root_less);

  // cluster numerically equal roots into multiplicities
  for (cd z : canonical) {
    if (!f.roots.empty() &&
        std::abs(z - f.roots.back().alpha) <= kPairTol * (1.0 + std::abs(z))) {
      ++f.roots.back().multiplicity;
    } else {
      f.roots.push_back(RootEntry{z, 1});
    }
  }
  return f;
}

WPoly expand(const Factorization& f) {
  // multiply out the substituted factors in deterministic stored order
  std::vector<cd> cs{cd(f.c, 0.0)};
  for (const RootEntry& e : f.roots) {
    for (int rep = 0; rep < e.multiplicity; ++rep) {
      std::vector<cd> next(cs.size() + 1, cd(0.0, 0.0));
      for (size_t i = 0; i < cs.size(); ++i) {
        next[i + 1] += cs[i];          // u * u^i v^(M-i)
        next[i] += -e.alpha * cs[i];   // -alpha v * u^i v^(M-i)
      }
      cs = std::move(next);
    }
  }

  double max_abs = 0.0, max_im = 0.0;
  for (cd v : cs) {
    max_abs = std::max(max_abs, std::abs(v));
    max_im = std::max(max_im, std::abs(v.imag()));
  }
  if (max_im > 1e-8 * std::max(max_abs, 1e-300))
    raise(errc::non_real_expansion,
          "root multiset is not conjugation-closed: imaginary residue " + format_double(max_im));

  const int total = static_cast<int>(cs.size()) - 1;
  WPoly out;
  for (int i = 0; i <= total; ++i) {
    const double a = cs[i].real();
    if (a == 0.0) continue;
    const int k = f.m + static_cast<int>(f.q) * i;
    const int l = f.n + static_cast<int>(f.p) * (total - i);
    out.add_term(k, l, a);
  }
  return out;
}

std::vector<int> gap_indices_of(const std::vector<cd>& sorted_roots, int N0) {
  if (N0 < 1) raise(errc::invalid_argument, "gap threshold order must be >= 1");
  std::vector<int> out;
  const double threshold = std::exp2(4.0 * N0);
  for (size_t i = 0; i + 1 < sorted_roots.size(); ++i) {
    const double lo = std::abs(sorted_roots[i]);
    const double hi = std::abs(sorted_roots[i + 1]);
    if (lo <= 0.0) raise(errc::invalid_argument, "gap scan requires nonzero roots");
    if (hi / lo >= threshold) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

std::vector<int> gap_indices(const Factorization& f, int N0) {
  return gap_indices_of(f.flattened(), N0);
}

DampingSelection select_damping_indices_of(const std::vector<cd>& sorted_roots, int s) {
  const int n = static_cast<int>(sorted_roots.size());
  if (s < 0 || s > n) raise(errc::invalid_argument, "damping order out of range");
  DampingSelection sel;
  if (s == 0) return sel;
  for (int s_eff = s; s_eff <= n; ++s_eff) {
    // prefix must be closed under conjugation as a multiset
    bool closed = true;
    for (int i = 0; i < s_eff && closed; ++i) {
      const cd z = sorted_roots[i];
      if (z.imag() == 0.0) continue;
      int count = 0, conj_count = 0;
      for (int j = 0; j < s_eff; ++j) {
        if (sorted_roots[j] == z) ++count;
        if (sorted_roots[j] == std::conj(z)) ++conj_count;
      }
      closed = (count == conj_count);
    }
    if (closed) {
      for (int i = 1; i <= s_eff; ++i) sel.indices.push_back(i);
      sel.adjusted = (s_eff != s);
      return sel;
    }
  }
  raise(errc::no_conjugate_invariant_selection,
        "no conjugation-closed prefix of length >= " + std::to_string(s));
}

DampingSelection select_damping_indices(const Factorization& f, int s) {
  return select_damping_indices_of(f.flattened(), s);
}

PolyTypeRatio poly_type_constant(const RealPoly& F, double lo, double hi, int order) {
  if (!(lo < hi)) raise(errc::invalid_argument, "empty interval for type-constant scan");
  if (order < 0) raise(errc::invalid_argument, "negative derivative order");
  RealPoly G = F;
  for (int i = 0; i < order; ++i) G = G.derivative();
  PolyTypeRatio out;
  if (G.degree() < 0) {
    out.unbounded = true;
    out.ratio = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<double> xs;
  const int samples = 2048;
  for (int i = 0; i <= samples; ++i) xs.push_back(lo + (hi - lo) * i / samples);
  // critical points of G refine the scan
  const RealPoly Gp = G.derivative();
  if (Gp.degree() >= 1) {
    for (cd z : real_poly_roots(Gp.coeff)) {
      if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z))) continue;
      const double x = z.real();
      if (x > lo && x < hi) xs.push_back(x);
    }
  }
  std::sort(xs.begin(), xs.end());

  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  bool sign_change = false;
  double prev = G.eval(xs[0]);
  for (double x : xs) {
    const double v = G.eval(x);
    sup = std::max(sup, std::abs(v));
    inf = std::min(inf, std::abs(v));
    if (v * prev < 0.0) sign_change = true;
    prev = v;
  }
  out.sup = sup;
  out.inf = inf;
  if (sign_change || inf == 0.0) {
    out.unbounded = true;
    out.inf = 0.0;
    out.ratio = std::numeric_limits<double>::infinity();
  } else {
    out.ratio = sup / inf;
  }
  return out;
}

}  // namespace oscillab
