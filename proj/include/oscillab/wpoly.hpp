#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscillab/rational.hpp"

namespace oscillab {

// One monomial a * x^k * y^l. Every coefficient carries a double projection
// used by the numeric layers; when the source was rational the exact value is
// kept alongside and survives the linear symbolic operations (sums, scalar
// multiples, partial derivatives).
struct Term {
  int k = 0;
  int l = 0;
  double a = 0.0;
  std::optional<Rat> exact;
};

class WPoly {
 public:
  WPoly() = default;

  static WPoly monomial(int k, int l, double a);
  static WPoly monomial(int k, int l, const Rat& a);

  void add_term(int k, int l, double a);
  void add_term(int k, int l, const Rat& a);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // max k+l, -1 for the zero polynomial
  const Term* find(int k, int l) const;

  double eval(double x, double y) const;
  double eval_dx(double x, double y) const;
  double eval_dy(double x, double y) const;

  WPoly partial_x() const;
  WPoly partial_y() const;
  WPoly scaled(double c) const;
  WPoly scaled(const Rat& c) const;

  friend WPoly operator+(const WPoly& a, const WPoly& b);
  bool same_support(const WPoly& other) const;

  std::string pretty() const;

 private:
  void insert(Term t);
  std::vector<Term> terms_;  // sorted by (k, l), no zero coefficients
};

WPoly hessian_xy(const WPoly& poly);  // d^2/dx dy

// Coprime positive weights (p, q) with p*k + q*l constant across the support.
struct WeightSignature {
  long long p = 1;
  long long q = 1;
  long long D = 0;
  Rat eta() const { return Rat(p, q); }
  Rat homogeneity() const { return Rat(D, q); }  // degree measured in the y-weight
};

// Throws EmptyPolynomial for the zero polynomial and NotWeightedHomogeneous
// when no valid weight pair exists. A single monomial reports (1, 1).
WeightSignature detect_weights(const WPoly& poly);

}  // namespace oscillab
