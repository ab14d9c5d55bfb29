#pragma once

#include <complex>
#include <vector>

#include "oscillab/wpoly.hpp"

namespace oscillab {

using cd = std::complex<double>;

// Univariate real polynomial in ascending coefficient order.
struct RealPoly {
  std::vector<double> coeff;  // coeff[i] * t^i
  double eval(double t) const;
  RealPoly derivative() const;
  int degree() const;  // -1 for the zero polynomial
};

// Complex roots of a real univariate polynomial given by ascending
// coefficients (companion-matrix eigenvalues plus two guarded Newton steps).
std::vector<cd> real_poly_roots(const std::vector<double>& ascending_coeff);

struct RootEntry {
  cd alpha;  // root of the substituted polynomial: P factors as prod (u - alpha v)
  int multiplicity = 1;
};

// Weighted-homogeneous factorization c * x^m * y^n * prod_t (x^q - alpha_t y^p).
// Stored roots are the alpha of the substituted form u = x^q, v = y^p; the
// equivalent product over x - alpha' y^(p/q) is exposed by eta_roots().
struct Factorization {
  double c = 1.0;
  int m = 0;
  int n = 0;
  std::vector<RootEntry> roots;  // sorted by (|alpha|, Re, Im), conjugation-closed
  long long p = 1;
  long long q = 1;

  Rat eta() const { return Rat(p, q); }
  int total_roots() const;
  // Multiplicity-expanded stored roots, sorted ascending by (|alpha|, Re, Im).
  std::vector<cd> flattened() const;
  // Roots of the x - alpha' y^(p/q) form: each stored alpha contributes its q
  // q-th roots, so the list is closed under conjugation and under
  // multiplication by q-th roots of unity. Sorted like flattened().
  std::vector<cd> eta_roots() const;
};

Factorization factorize(const WPoly& poly, const WeightSignature& w);

// Multiplies the factorization back out; raises NonRealExpansion if the root
// multiset is not conjugation-closed enough for real coefficients.
WPoly expand(const Factorization& f);

// 1-based positions t in a sorted modulus list where |alpha_{t+1}|/|alpha_t|
// jumps by at least 2^(4*N0).
std::vector<int> gap_indices_of(const std::vector<cd>& sorted_roots, int N0);
std::vector<int> gap_indices(const Factorization& f, int N0);

struct DampingSelection {
  std::vector<int> indices;  // always the prefix 1..s_eff of the sorted list
  bool adjusted = false;     // s was enlarged to close a conjugate pair
};

// Smallest conjugation-closed prefix of length >= s.
DampingSelection select_damping_indices_of(const std::vector<cd>& sorted_roots, int s);
DampingSelection select_damping_indices(const Factorization& f, int s);

struct PolyTypeRatio {
  bool unbounded = false;  // the derivative vanishes somewhere on the interval
  double sup = 0.0;
  double inf = 0.0;
  double ratio = 0.0;  // sup/inf, meaningful only when !unbounded
};

// sup/inf of |F^(order)| over [lo, hi].
PolyTypeRatio poly_type_constant(const RealPoly& F, double lo, double hi, int order);

}  // namespace oscillab
