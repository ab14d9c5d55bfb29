#include "oscillab/cutoff.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace oscillab {
namespace {

TEST(SmoothStep, ClampsAndIsSymmetric) {
  EXPECT_DOUBLE_EQ(smooth_step(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(smooth_step(0.0), 0.0);
  EXPECT_DOUBLE_EQ(smooth_step(1.0), 1.0);
  EXPECT_DOUBLE_EQ(smooth_step(2.0), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
  for (double t = 0.05; t < 1.0; t += 0.05)
    EXPECT_NEAR(smooth_step(t) + smooth_step(1.0 - t), 1.0, 1e-14);
}

TEST(SmoothStep, MonotoneOnTheRamp) {
  double prev = -1.0;
  for (double t = 0.0; t <= 1.0; t += 0.01) {
    const double v = smooth_step(t);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(BumpProfile, PlateauAndSupport) {
  EXPECT_DOUBLE_EQ(bump_profile(0.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(bump_profile(0.49, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(bump_profile(-0.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(bump_profile(1.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(bump_profile(-1.2, 0.5), 0.0);
  const double mid = bump_profile(0.75, 0.5);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
  EXPECT_DOUBLE_EQ(bump_profile(0.75, 0.5), bump_profile(-0.75, 0.5));
}

TEST(LittlewoodPaley, ChiPlateauAndDecay) {
  EXPECT_DOUBLE_EQ(lp_chi(0.5), 1.0);
  EXPECT_DOUBLE_EQ(lp_chi(1.0), 1.0);
  EXPECT_DOUBLE_EQ(lp_chi(2.0), 0.0);
  EXPECT_DOUBLE_EQ(lp_chi(8.0), 0.0);
  EXPECT_GT(lp_chi(1.5), 0.0);
  EXPECT_LT(lp_chi(1.5), 1.0);
}

TEST(LittlewoodPaley, PhiSupportedInOneOctaveBand) {
  EXPECT_DOUBLE_EQ(lp_phi(0.4), 0.0);   // below 1/2
  EXPECT_DOUBLE_EQ(lp_phi(2.5), 0.0);   // above 2
  EXPECT_DOUBLE_EQ(lp_phi(1.0), 1.0);   // chi(1) - chi(2)
  EXPECT_GT(lp_phi(0.75), 0.0);
  EXPECT_GT(lp_phi(1.5), 0.0);
}

TEST(DyadicPartition, TelescopesToOneEverywhere) {
  const DyadicPartition part = dyadic_partition(-20, 20);
  for (int i = 0; i < 1000; ++i) {
    // log-spaced sample points covering far below and far above the band
    const double x = std::exp2(-25.0 + 50.0 * i / 999.0);
    double total = part.low_tail(x) + part.high_tail(x);
    for (int j = part.j_min; j <= part.j_max; ++j) total += part.piece(x, j);
    EXPECT_NEAR(total, 1.0, 1e-10) << "x = " << x;
  }
}

TEST(DyadicPartition, TailsAreExactChiExpressions) {
  const DyadicPartition part = dyadic_partition(-3, 3);
  for (double x : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    EXPECT_NEAR(part.low_tail(x), lp_chi(x / std::exp2(-4)), 1e-12);
    EXPECT_NEAR(part.high_tail(x), 1.0 - lp_chi(x / std::exp2(3)), 1e-12);
  }
}

TEST(CutoffTensorBump, OneOnThePlateauZeroOutside) {
  CutoffSpec spec;
  spec.kind = CutoffKind::tensor_bump;
  spec.x0 = -1.0;
  spec.x1 = 1.0;
  spec.y0 = -2.0;
  spec.y1 = 2.0;
  spec.plateau = 0.5;
  const Cutoff phi = build_cutoff(spec);
  EXPECT_DOUBLE_EQ(phi(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.4, -0.9), 1.0);  // inside half the half-widths
  EXPECT_DOUBLE_EQ(phi(1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(phi(0.0, 2.5), 0.0);
  EXPECT_GT(phi(0.8, 0.0), 0.0);
  EXPECT_LT(phi(0.8, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(phi.x_lo(), -1.0);
  EXPECT_DOUBLE_EQ(phi.y_hi(), 2.0);
}

TEST(CutoffTensorBump, OffCenterBox) {
  CutoffSpec spec;
  spec.kind = CutoffKind::tensor_bump;
  spec.x0 = 0.5;
  spec.x1 = 1.5;
  spec.y0 = 0.5;
  spec.y1 = 1.5;
  const Cutoff phi = build_cutoff(spec);
  EXPECT_DOUBLE_EQ(phi(1.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.5, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(phi(0.0, 0.0), 0.0);
}

TEST(CutoffRadialBump, RotationallySymmetricInBoxCoordinates) {
  CutoffSpec spec;
  spec.kind = CutoffKind::radial_bump;
  spec.plateau = 0.25;
  const Cutoff phi = build_cutoff(spec);  // unit box
  EXPECT_DOUBLE_EQ(phi(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(phi(1.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(phi(0.8, 0.8), 0.0);  // radius > 1
  const double a = phi(0.6, 0.0);
  const double b = phi(0.0, 0.6);
  EXPECT_NEAR(a, b, 1e-15);
  EXPECT_GT(a, 0.0);
}

TEST(CutoffIndicator, SharpEdges) {
  CutoffSpec spec;
  spec.kind = CutoffKind::indicator_box;
  spec.x0 = 0.0;
  spec.x1 = 1.0;
  spec.y0 = 0.0;
  spec.y1 = 1.0;
  const Cutoff phi = build_cutoff(spec);
  EXPECT_DOUBLE_EQ(phi(0.5, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.99, 0.01), 1.0);
  EXPECT_DOUBLE_EQ(phi(1.01, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(phi(-0.01, 0.5), 0.0);
}

TEST(CutoffDyadicCell, ProductOfOctaveBands) {
  CutoffSpec spec;
  spec.kind = CutoffKind::dyadic_cell;
  spec.j = 1;  // x band around 2
  spec.k = -1; // y band around 1/2
  const Cutoff phi = build_cutoff(spec);
  EXPECT_DOUBLE_EQ(phi(2.0, 0.5), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.9, 0.5), 0.0);   // x below 2^0
  EXPECT_DOUBLE_EQ(phi(2.0, 1.1), 0.0);   // y above 2^0
  EXPECT_NEAR(phi(3.0, 0.5), lp_phi(1.5), 1e-15);
  // support box is [2^(j-1), 2^(j+1)] x [2^(k-1), 2^(k+1)]
  EXPECT_DOUBLE_EQ(phi.x_lo(), 1.0);
  EXPECT_DOUBLE_EQ(phi.x_hi(), 4.0);
  EXPECT_DOUBLE_EQ(phi.y_lo(), 0.25);
  EXPECT_DOUBLE_EQ(phi.y_hi(), 1.0);
}

TEST(CutoffTrapezoid, CurvedBandBetweenPolynomials) {
  CutoffSpec spec;
  spec.kind = CutoffKind::curved_trapezoid;
  spec.x0 = 0.0;
  spec.x1 = 1.0;
  spec.lower_edge.coeff = {0.0};        // y >= 0
  spec.upper_edge.coeff = {0.0, 1.0};   // y <= x
  const Cutoff phi = build_cutoff(spec);
  EXPECT_DOUBLE_EQ(phi(0.5, 0.25), 1.0);
  EXPECT_DOUBLE_EQ(phi(0.5, 0.75), 0.0);  // above the line y = x
  EXPECT_DOUBLE_EQ(phi(0.5, -0.1), 0.0);
  EXPECT_DOUBLE_EQ(phi(1.5, 0.1), 0.0);   // outside the x range
  // bounding box tracks the edge polynomials over the x range
  EXPECT_DOUBLE_EQ(phi.y_lo(), 0.0);
  EXPECT_NEAR(phi.y_hi(), 1.0, 1e-9);
}

TEST(CutoffValidation, RejectsBadSpecs) {
  CutoffSpec degenerate;
  degenerate.kind = CutoffKind::tensor_bump;
  degenerate.x0 = 1.0;
  degenerate.x1 = 1.0;
  EXPECT_RAISES(build_cutoff(degenerate), errc::invalid_argument);

  CutoffSpec plateau;
  plateau.kind = CutoffKind::tensor_bump;
  plateau.plateau = 1.0;
  EXPECT_RAISES(build_cutoff(plateau), errc::invalid_argument);

  CutoffSpec crossing;
  crossing.kind = CutoffKind::curved_trapezoid;
  crossing.x0 = 0.0;
  crossing.x1 = 1.0;
  crossing.lower_edge.coeff = {1.0};  // y >= 1 but y <= x <= 1: empty interior
  crossing.upper_edge.coeff = {0.0, 1.0};
  EXPECT_RAISES(build_cutoff(crossing), errc::invalid_argument);
}

}  // namespace
}  // namespace oscillab
