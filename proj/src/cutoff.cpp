#include "oscillab/cutoff.hpp"

#include <algorithm>
#include <cmath>

#include "oscillab/errors.hpp"

namespace oscillab {

namespace {

double germ(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = germ(t);
  const double b = germ(1.0 - t);
  return a / (a + b);
}

double bump_profile(double t, double plateau) {
  const double u = std::abs(t);
  if (u <= plateau) return 1.0;
  if (u >= 1.0) return 0.0;
  return smooth_step((1.0 - u) / (1.0 - plateau));
}

double lp_chi(double x) {
  if (x <= 1.0) return 1.0;
  if (x >= 2.0) return 0.0;
  return 1.0 - smooth_step(std::log2(x));
}

double lp_phi(double x) { return lp_chi(x) - lp_chi(2.0 * x); }

Cutoff::Cutoff(const CutoffSpec& spec) : spec_(spec) {
  switch (spec_.kind) {
    case CutoffKind::tensor_bump:
    case CutoffKind::radial_bump:
      if (!(spec_.plateau >= 0.0 && spec_.plateau < 1.0))
        raise(errc::invalid_argument, "bump plateau must lie in [0, 1)");
      [[fallthrough]];
    case CutoffKind::indicator_box:
      if (!(spec_.x0 < spec_.x1 && spec_.y0 < spec_.y1))
        raise(errc::invalid_argument, "cutoff box must be non-degenerate");
      bx0_ = spec_.x0;
      bx1_ = spec_.x1;
      by0_ = spec_.y0;
      by1_ = spec_.y1;
      break;
    case CutoffKind::dyadic_cell:
      bx0_ = std::ldexp(1.0, spec_.j - 1);
      bx1_ = std::ldexp(1.0, spec_.j + 1);
      by0_ = std::ldexp(1.0, spec_.k - 1);
      by1_ = std::ldexp(1.0, spec_.k + 1);
      break;
    case CutoffKind::curved_trapezoid: {
      if (!(spec_.x0 < spec_.x1))
        raise(errc::invalid_argument, "curved trapezoid needs a non-degenerate x-interval");
      if (spec_.lower_edge.coeff.empty() || spec_.upper_edge.coeff.empty())
        raise(errc::invalid_argument, "curved trapezoid needs both edge polynomials");
      bx0_ = spec_.x0;
      bx1_ = spec_.x1;
      double lo = spec_.lower_edge.eval(spec_.x0);
      double hi = spec_.upper_edge.eval(spec_.x0);
      const int samples = 256;
      for (int i = 0; i <= samples; ++i) {
        const double x = spec_.x0 + (spec_.x1 - spec_.x0) * i / samples;
        lo = std::min(lo, spec_.lower_edge.eval(x));
        hi = std::max(hi, spec_.upper_edge.eval(x));
      }
      if (!(lo < hi)) raise(errc::invalid_argument, "curved trapezoid has empty interior");
      by0_ = lo;
      by1_ = hi;
      break;
    }
    default:
      raise(errc::unsupported_kind, "unknown cutoff kind");
  }
}

double Cutoff::operator()(double x, double y) const {
  switch (spec_.kind) {
    case CutoffKind::tensor_bump: {
      const double cx = 0.5 * (spec_.x0 + spec_.x1), hx = 0.5 * (spec_.x1 - spec_.x0);
      const double cy = 0.5 * (spec_.y0 + spec_.y1), hy = 0.5 * (spec_.y1 - spec_.y0);
      return bump_profile((x - cx) / hx, spec_.plateau) * bump_profile((y - cy) / hy, spec_.plateau);
    }
    case CutoffKind::radial_bump: {
      const double cx = 0.5 * (spec_.x0 + spec_.x1), hx = 0.5 * (spec_.x1 - spec_.x0);
      const double cy = 0.5 * (spec_.y0 + spec_.y1), hy = 0.5 * (spec_.y1 - spec_.y0);
      const double u = (x - cx) / hx, v = (y - cy) / hy;
      return bump_profile(std::sqrt(u * u + v * v), spec_.plateau);
    }
    case CutoffKind::indicator_box:
      return (x >= spec_.x0 && x <= spec_.x1 && y >= spec_.y0 && y <= spec_.y1) ? 1.0 : 0.0;
    case CutoffKind::dyadic_cell:
      return lp_phi(std::ldexp(x, -spec_.j)) * lp_phi(std::ldexp(y, -spec_.k));
    case CutoffKind::curved_trapezoid:
      if (x < spec_.x0 || x > spec_.x1) return 0.0;
      return (y >= spec_.lower_edge.eval(x) && y <= spec_.upper_edge.eval(x)) ? 1.0 : 0.0;
  }
  raise(errc::unsupported_kind, "unknown cutoff kind");
}

Cutoff build_cutoff(const CutoffSpec& spec) { return Cutoff(spec); }

const char* cutoff_kind_name(CutoffKind k) {
  switch (k) {
    case CutoffKind::tensor_bump: return "tensor_bump";
    case CutoffKind::radial_bump: return "radial_bump";
    case CutoffKind::indicator_box: return "indicator_box";
    case CutoffKind::dyadic_cell: return "dyadic_cell";
    case CutoffKind::curved_trapezoid: return "curved_trapezoid";
  }
  return "unknown";
}

double DyadicPartition::piece(double x, int j) const { return lp_phi(std::ldexp(x, -j)); }

double DyadicPartition::low_tail(double x) const { return lp_chi(std::ldexp(x, -(j_min - 1))); }

double DyadicPartition::high_tail(double x) const { return 1.0 - lp_chi(std::ldexp(x, -j_max)); }

DyadicPartition dyadic_partition(int j_min, int j_max) {
  if (j_min > j_max) raise(errc::invalid_argument, "dyadic partition needs j_min <= j_max");
  return DyadicPartition{j_min, j_max};
}

}  // namespace oscillab
