#include "oscillab/wpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "oscillab/errors.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

WPoly WPoly::monomial(int k, int l, double a) {
  WPoly p;
  p.add_term(k, l, a);
  return p;
}

WPoly WPoly::monomial(int k, int l, const Rat& a) {
  WPoly p;
  p.add_term(k, l, a);
  return p;
}

void WPoly::add_term(int k, int l, double a) { insert(Term{k, l, a, std::nullopt}); }

void WPoly::add_term(int k, int l, const Rat& a) { insert(Term{k, l, to_double(a), a}); }

void WPoly::insert(Term t) {
  if (t.k < 0 || t.l < 0) raise(errc::invalid_argument, "monomial exponents must be non-negative");
  auto it = std::lower_bound(terms_.begin(), terms_.end(), t, [](const Term& a, const Term& b) {
    return a.k != b.k ? a.k < b.k : a.l < b.l;
  });
  if (it != terms_.end() && it->k == t.k && it->l == t.l) {
    if (it->exact && t.exact) {
      const Rat sum = *it->exact + *t.exact;
      it->exact = sum;
      it->a = to_double(sum);
      if (sum == Rat(0)) terms_.erase(it);
      return;
    }
    it->a += t.a;
    it->exact.reset();
    if (it->a == 0.0) terms_.erase(it);
    return;
  }
  const bool zero = t.exact ? (*t.exact == Rat(0)) : (t.a == 0.0);
  if (!zero) terms_.insert(it, std::move(t));
}

int WPoly::degree() const {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.k + t.l);
  return d;
}

const Term* WPoly::find(int k, int l) const {
  for (const Term& t : terms_)
    if (t.k == k && t.l == l) return &t;
  return nullptr;
}

double WPoly::eval(double x, double y) const {
  double s = 0.0;
  for (const Term& t : terms_) s += t.a * ipow(x, t.k) * ipow(y, t.l);
  return s;
}

double WPoly::eval_dx(double x, double y) const {
  double s = 0.0;
  for (const Term& t : terms_)
    if (t.k >= 1) s += t.a * t.k * ipow(x, t.k - 1) * ipow(y, t.l);
  return s;
}

double WPoly::eval_dy(double x, double y) const {
  double s = 0.0;
  for (const Term& t : terms_)
    if (t.l >= 1) s += t.a * t.l * ipow(x, t.k) * ipow(y, t.l - 1);
  return s;
}

WPoly WPoly::partial_x() const {
  WPoly out;
  for (const Term& t : terms_) {
    if (t.k < 1) continue;
    if (t.exact)
      out.add_term(t.k - 1, t.l, *t.exact * Rat(t.k));
    else
      out.add_term(t.k - 1, t.l, t.a * t.k);
  }
  return out;
}

WPoly WPoly::partial_y() const {
  WPoly out;
  for (const Term& t : terms_) {
    if (t.l < 1) continue;
    if (t.exact)
      out.add_term(t.k, t.l - 1, *t.exact * Rat(t.l));
    else
      out.add_term(t.k, t.l - 1, t.a * t.l);
  }
  return out;
}

WPoly WPoly::scaled(double c) const {
  WPoly out;
  for (const Term& t : terms_) out.add_term(t.k, t.l, t.a * c);
  return out;
}

WPoly WPoly::scaled(const Rat& c) const {
  WPoly out;
  for (const Term& t : terms_) {
    if (t.exact)
      out.add_term(t.k, t.l, *t.exact * c);
    else
      out.add_term(t.k, t.l, t.a * to_double(c));
  }
  return out;
}

WPoly operator+(const WPoly& a, const WPoly& b) {
  WPoly out = a;
  for (const Term& t : b.terms_) out.insert(t);
  return out;
}

bool WPoly::same_support(const WPoly& other) const {
  if (terms_.size() != other.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].k != other.terms_[i].k || terms_[i].l != other.terms_[i].l) return false;
  return true;
}

std::string WPoly::pretty() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // highest total degree first reads more naturally
  std::vector<Term> by_degree = terms_;
  std::stable_sort(by_degree.begin(), by_degree.end(), [](const Term& a, const Term& b) {
    if (a.k + a.l != b.k + b.l) return a.k + a.l > b.k + b.l;
    return a.k > b.k;
  });
  for (const Term& t : by_degree) {
    const bool neg = t.a < 0.0;
    const double mag = std::abs(t.a);
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    std::string coeff;
    if (t.exact) {
      Rat m = *t.exact;
      if (m < Rat(0)) m = -m;
      if (m != Rat(1) || (t.k == 0 && t.l == 0)) coeff = rat_string(m);
    } else if (mag != 1.0 || (t.k == 0 && t.l == 0)) {
      coeff = format_double(mag);
    }
    os << coeff;
    if (t.k > 0) {
      if (!coeff.empty()) os << " ";
      os << "x";
      if (t.k > 1) os << "^" << t.k;
    }
    if (t.l > 0) {
      if (!coeff.empty() || t.k > 0) os << " ";
      os << "y";
      if (t.l > 1) os << "^" << t.l;
    }
  }
  return os.str();
}

WPoly hessian_xy(const WPoly& poly) {
  WPoly out;
  for (const Term& t : poly.terms()) {
    if (t.k < 1 || t.l < 1) continue;
    const long long f = static_cast<long long>(t.k) * t.l;
    if (t.exact)
      out.add_term(t.k - 1, t.l - 1, *t.exact * Rat(f));
    else
      out.add_term(t.k - 1, t.l - 1, t.a * static_cast<double>(f));
  }
  return out;
}

WeightSignature detect_weights(const WPoly& poly) {
  const auto& terms = poly.terms();
  if (terms.empty()) raise(errc::empty_polynomial, "cannot detect weights of the zero polynomial");
  if (terms.size() == 1)
    return WeightSignature{1, 1, static_cast<long long>(terms[0].k) + terms[0].l};

  // Any two terms with different x-exponents pin the weight ratio: from
  // p*k1 + q*l1 = p*k2 + q*l2 we get p/q = (l2 - l1)/(k1 - k2), which must be
  // positive and is reduced to lowest form.
  long long p = 0, q = 0;
  for (size_t i = 1; i < terms.size() && p == 0; ++i) {
    const long long dk = static_cast<long long>(terms[0].k) - terms[i].k;
    const long long dl = static_cast<long long>(terms[i].l) - terms[0].l;
    if (dk == 0) continue;
    if (dl == 0 || (dk > 0) != (dl > 0))
      raise(errc::not_weighted_homogeneous,
            "no positive weight pair fits terms of " + poly.pretty());
    const long long g = std::gcd(std::llabs(dl), std::llabs(dk));
    p = std::llabs(dl) / g;
    q = std::llabs(dk) / g;
  }
  if (p == 0)
    raise(errc::not_weighted_homogeneous,
          "terms of " + poly.pretty() + " share one x-exponent with different y-exponents");

  const long long D = p * terms[0].k + q * terms[0].l;
  for (const Term& t : terms)
    if (p * t.k + q * t.l != D)
      raise(errc::not_weighted_homogeneous,
            poly.pretty() + " is not weighted homogeneous for weights (" + std::to_string(p) +
                ", " + std::to_string(q) + ")");
  return WeightSignature{p, q, D};
}

}  // namespace oscillab
