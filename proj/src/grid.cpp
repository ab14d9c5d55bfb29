#include "oscillab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "oscillab/errors.hpp"

namespace oscillab {

ProbeBounds probe_derivative_sups(const Phase& phase, double x0, double x1, double y0, double y1) {
  ProbeBounds out;
  const int n = 63;
  for (int i = 0; i <= n; ++i) {
    const double x = x0 + (x1 - x0) * i / n;
    for (int j = 0; j <= n; ++j) {
      const double y = y0 + (y1 - y0) * j / n;
      const double gx = std::abs(phase.dx(x, y));
      const double gy = std::abs(phase.dy(x, y));
      if (std::isfinite(gx)) out.lx = std::max(out.lx, gx);
      if (std::isfinite(gy)) out.ly = std::max(out.ly, gy);
    }
  }
  return out;
}

namespace {

int axis_points(double lambda, double sup_grad, double width, const GridCaps& caps,
                bool* at_floor, bool* under_resolved) {
  const double raw =
      std::ceil(caps.samples_per_period * std::abs(lambda) * sup_grad * width / (2.0 * M_PI));
  if (raw < caps.m_floor) {
    *at_floor = true;
    return caps.m_floor;
  }
  if (raw > caps.m_cap) {
    *under_resolved = true;
    return caps.m_cap;
  }
  return static_cast<int>(raw);
}

}  // namespace

GridSpec auto_grid_box(const Phase& phase, double lambda, double x0, double x1, double y0,
                       double y1, const GridCaps& caps, const std::optional<ProbeBounds>& probe) {
  if (!(x0 < x1 && y0 < y1)) raise(errc::invalid_argument, "grid box must be non-degenerate");
  if (caps.m_floor < 16) raise(errc::invalid_argument, "grid floor below the minimum of 16");
  if (caps.m_cap < caps.m_floor) raise(errc::invalid_argument, "grid cap below the floor");
  const ProbeBounds b = probe ? *probe : probe_derivative_sups(phase, x0, x1, y0, y1);
  GridSpec g;
  g.x_lo = x0;
  g.x_hi = x1;
  g.y_lo = y0;
  g.y_hi = y1;
  bool floor_x = false, floor_y = false;
  g.mx = axis_points(lambda, b.lx, x1 - x0, caps, &floor_x, &g.under_resolved);
  g.my = axis_points(lambda, b.ly, y1 - y0, caps, &floor_y, &g.under_resolved);
  g.at_floor = floor_x || floor_y;
  return g;
}

GridSpec auto_grid(const Phase& phase, double lambda, const Cutoff& cutoff, const GridCaps& caps,
                   const std::optional<ProbeBounds>& probe) {
  return auto_grid_box(phase, lambda, cutoff.x_lo(), cutoff.x_hi(), cutoff.y_lo(), cutoff.y_hi(),
                       caps, probe);
}

}  // namespace oscillab
