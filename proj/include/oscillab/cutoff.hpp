#pragma once

#include "oscillab/factorization.hpp"  // RealPoly

namespace oscillab {

// C^infinity transition built from the exp(-1/t) germ: 0 for t <= 0, 1 for t >= 1.
double smooth_step(double t);

// Even plateau profile: 1 on |t| <= plateau, 0 for |t| >= 1, smooth in between.
double bump_profile(double t, double plateau);

// Smooth Littlewood-Paley pieces: lp_chi is 1 for x <= 1 and 0 for x >= 2;
// lp_phi(x) = lp_chi(x) - lp_chi(2x) is supported in [1/2, 2].
double lp_chi(double x);
double lp_phi(double x);

enum class CutoffKind {
  tensor_bump,       // product of 1-d plateau bumps on a box
  radial_bump,       // plateau bump in the normalized ellipse radius of a box
  indicator_box,     // sharp box indicator
  dyadic_cell,       // lp_phi(x/2^j) * lp_phi(y/2^k)
  curved_trapezoid,  // indicator of a <= x <= b, g(x) <= y <= h(x)
};

const char* cutoff_kind_name(CutoffKind k);

struct CutoffSpec {
  CutoffKind kind = CutoffKind::tensor_bump;
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
  double plateau = 0.5;  // fraction of each half-width where the bump is exactly 1
  int j = 0, k = 0;      // dyadic_cell scales
  RealPoly lower_edge, upper_edge;  // curved_trapezoid: lower_edge(x) <= y <= upper_edge(x)
};

class Cutoff {
 public:
  explicit Cutoff(const CutoffSpec& spec);
  double operator()(double x, double y) const;
  const CutoffSpec& spec() const { return spec_; }
  // bounding box of the support (used for grid construction)
  double x_lo() const { return bx0_; }
  double x_hi() const { return bx1_; }
  double y_lo() const { return by0_; }
  double y_hi() const { return by1_; }

 private:
  CutoffSpec spec_;
  double bx0_, bx1_, by0_, by1_;
};

Cutoff build_cutoff(const CutoffSpec& spec);

// Telescoped dyadic partition over scales j_min..j_max together with the two
// tail pieces that complete the sum to exactly 1 for every x > 0.
struct DyadicPartition {
  int j_min = 0;
  int j_max = 0;
  double piece(double x, int j) const;  // lp_phi(x / 2^j)
  double low_tail(double x) const;      // sum over j < j_min
  double high_tail(double x) const;     // sum over j > j_max
};

DyadicPartition dyadic_partition(int j_min, int j_max);

}  // namespace oscillab
