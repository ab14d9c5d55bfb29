#pragma once

#include <optional>

#include "oscillab/cutoff.hpp"
#include "oscillab/phase.hpp"

namespace oscillab {

// Uniform midpoint grid on a box. mx counts x-samples (kernel rows), my counts
// y-samples (columns).
struct GridSpec {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
  int mx = 0, my = 0;
  bool at_floor = false;        // oscillation demanded fewer points than the floor
  bool under_resolved = false;  // oscillation demanded more points than the cap

  double dx() const { return (x_hi - x_lo) / mx; }
  double dy() const { return (y_hi - y_lo) / my; }
  double x(int i) const { return x_lo + (i + 0.5) * dx(); }
  double y(int j) const { return y_lo + (j + 0.5) * dy(); }
  long long cells() const { return static_cast<long long>(mx) * my; }
};

struct GridCaps {
  int m_floor = 256;
  int m_cap = 8192;
  int samples_per_period = 8;
};

// Sup of |dS/dx| and |dS/dy| over an inclusive 64x64 probe lattice (corners
// included — the extremes of polynomial phases live on the boundary).
struct ProbeBounds {
  double lx = 0.0;
  double ly = 0.0;
};

ProbeBounds probe_derivative_sups(const Phase& phase, double x0, double x1, double y0, double y1);

// Chooses per-axis resolution so each axis keeps samples_per_period points per
// oscillation of exp(i lambda S), clamped to [m_floor, m_cap]. A precomputed
// probe can be supplied to skip (or cache) the derivative scan.
GridSpec auto_grid_box(const Phase& phase, double lambda, double x0, double x1, double y0,
                       double y1, const GridCaps& caps = {},
                       const std::optional<ProbeBounds>& probe = std::nullopt);

GridSpec auto_grid(const Phase& phase, double lambda, const Cutoff& cutoff,
                   const GridCaps& caps = {},
                   const std::optional<ProbeBounds>& probe = std::nullopt);

}  // namespace oscillab
