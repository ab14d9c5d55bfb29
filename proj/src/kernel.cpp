#include "oscillab/kernel.hpp"

#include <atomic>
#include <cmath>
#include <limits>

#include "oscillab/errors.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

double DampingOpt::abs_value(double x, double y) const {
  if (const auto* poly = std::get_if<PolyDamping>(&form)) return std::abs(poly->d.eval(x, y));
  if (const auto* prod = std::get_if<ProductDamping>(&form)) {
    const double yp = pow_real(std::abs(y), prod->eta);
    double acc = ipow(std::abs(x), prod->m);
    for (cd a : prod->roots) acc *= std::abs(cd(x, 0.0) - a * yp);
    return acc;
  }
  const auto& mod = std::get<ModifiedDamping>(form);
  const double yp = pow_real(std::abs(y), mod.eta);
  double acc = 1.0;
  for (cd a : mod.roots) acc *= std::abs(cd(x, 0.0) - a * yp);
  return mod.additive + acc;
}

namespace {

bool quadrant_mask(int quadrant, double x, double y) {
  switch (quadrant) {
    case 0: return true;
    case 1: return x >= 0.0 && y >= 0.0;
    case 2: return x <= 0.0 && y >= 0.0;
    case 3: return x <= 0.0 && y <= 0.0;
    case 4: return x >= 0.0 && y <= 0.0;
    default: raise(errc::invalid_argument, "quadrant must be 0..4");
  }
}

// |D|^z with the boundary conventions: Re z > 0 extends by zero through the
// zero set, Re z = 0 pins the factor to 1 there, Re z < 0 relies on the
// pre-resolved floor.
cd damping_factor(double a, cd z, double floor_value) {
  const double re = z.real(), im = z.imag();
  if (re == 0.0 && a == 0.0) return cd(1.0, 0.0);
  if (re > 0.0 && a == 0.0) return cd(0.0, 0.0);
  if (re < 0.0 && a < floor_value) a = floor_value;
  const double mag = std::pow(a, re);
  const double ang = (im != 0.0 && a > 0.0) ? im * std::log(a) : 0.0;
  return std::polar(mag, ang);
}

}  // namespace

cd KernelMatrix::compute(int i, int j) const {
  const double x = grid_.x(i);
  const double y = grid_.y(j);
  double w = (*cutoff_)(x, y);
  if (!quadrant_mask(quadrant_, x, y)) w = 0.0;
  if (w == 0.0) return cd(0.0, 0.0);
  cd damp(1.0, 0.0);
  if (damping_) damp = damping_factor(damping_->abs_value(x, y), damping_->z, floor_);
  const cd osc = std::polar(1.0, lambda_ * (*phase_)(x, y));
  return osc * damp * (w * dy_);
}

cd KernelMatrix::entry(int i, int j) const {
  if (is_dense()) return data_[static_cast<size_t>(i) * cols() + j];
  return compute(i, j);
}

void KernelMatrix::apply_serial(const cd* in, cd* out) const {
  const int r = rows(), c = cols();
  if (is_dense()) {
    for (int i = 0; i < r; ++i) {
      const cd* row = data_.data() + static_cast<size_t>(i) * c;
      cd acc(0.0, 0.0);
      for (int j = 0; j < c; ++j) acc += row[j] * in[j];
      out[i] = acc;
    }
    return;
  }
  for (int i = 0; i < r; ++i) {
    cd acc(0.0, 0.0);
    for (int j = 0; j < c; ++j) acc += compute(i, j) * in[j];
    out[i] = acc;
  }
}

void KernelMatrix::apply(const cd* in, cd* out) const {
  const int r = rows(), c = cols();
  if (is_dense()) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < r; ++i) {
      const cd* row = data_.data() + static_cast<size_t>(i) * c;
      cd acc(0.0, 0.0);
      for (int j = 0; j < c; ++j) acc += row[j] * in[j];
      out[i] = acc;
    }
    return;
  }
#pragma omp parallel for schedule(static)
  for (int i = 0; i < r; ++i) {
    cd acc(0.0, 0.0);
    for (int j = 0; j < c; ++j) acc += compute(i, j) * in[j];
    out[i] = acc;
  }
}

void KernelMatrix::apply_adjoint_serial(const cd* in, cd* out) const {
  const int r = rows(), c = cols();
  for (int j = 0; j < c; ++j) {
    cd acc(0.0, 0.0);
    if (is_dense()) {
      for (int i = 0; i < r; ++i) acc += std::conj(data_[static_cast<size_t>(i) * c + j]) * in[i];
    } else {
      for (int i = 0; i < r; ++i) acc += std::conj(compute(i, j)) * in[i];
    }
    out[j] = acc;
  }
}

void KernelMatrix::apply_adjoint(const cd* in, cd* out) const {
  const int r = rows(), c = cols();
#pragma omp parallel for schedule(static)
  for (int j = 0; j < c; ++j) {
    cd acc(0.0, 0.0);
    if (is_dense()) {
      for (int i = 0; i < r; ++i) acc += std::conj(data_[static_cast<size_t>(i) * c + j]) * in[i];
    } else {
      for (int i = 0; i < r; ++i) acc += std::conj(compute(i, j)) * in[i];
    }
    out[j] = acc;
  }
}

double KernelMatrix::max_abs_row_sum() const {
  const int r = rows(), c = cols();
  std::vector<double> sums(r, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < r; ++i) {
    double acc = 0.0;
    for (int j = 0; j < c; ++j) acc += std::abs(entry(i, j));
    sums[i] = acc;
  }
  double best = 0.0;
  for (double s : sums) best = std::max(best, s);
  return best;
}

double KernelMatrix::max_abs_col_sum() const {
  const int r = rows(), c = cols();
  std::vector<double> sums(c, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < c; ++j) {
    double acc = 0.0;
    for (int i = 0; i < r; ++i) acc += std::abs(entry(i, j));
    sums[j] = acc;
  }
  double best = 0.0;
  for (double s : sums) best = std::max(best, s);
  return best;
}

KernelMatrix KernelMatrix::from_dense(std::vector<cd> entries, int rows, int cols, double dx,
                                      double dy) {
  if (rows < 1 || cols < 1 || entries.size() != static_cast<size_t>(rows) * cols)
    raise(errc::invalid_argument, "dense kernel dimensions do not match the entry count");
  KernelMatrix K;
  K.grid_ = GridSpec{0.0, rows * dx, 0.0, cols * dy, rows, cols, false, false};
  K.dx_ = dx;
  K.dy_ = dy;
  K.data_ = std::move(entries);
  return K;
}

KernelMatrix build_kernel(PhasePtr phase, double lambda, const Cutoff& cutoff,
                          const std::optional<DampingOpt>& damping, const GridSpec& grid,
                          int quadrant, KernelStorageMode mode) {
  if (!phase) raise(errc::invalid_argument, "kernel needs a phase");
  // Tiny grids are allowed here so hand-checkable kernels stay constructible;
  // production grid sizes are enforced where grids are chosen, not consumed.
  if (grid.mx < 1 || grid.my < 1) raise(errc::invalid_argument, "grid must be at least 1x1");
  quadrant_mask(quadrant, 0.0, 0.0);  // validates the quadrant index

  KernelMatrix K;
  K.grid_ = grid;
  K.dx_ = grid.dx();
  K.dy_ = grid.dy();
  K.phase_ = std::move(phase);
  K.cutoff_.emplace(cutoff);
  K.damping_ = damping;
  K.lambda_ = lambda;
  K.quadrant_ = quadrant;

  if (damping && damping->z.real() < 0.0) {
    if (damping->floor_eps > 0.0) {
      K.floor_ = damping->floor_eps;
    } else if (damping->floor_eps < 0.0) {
      // automatic floor from the probed scale of |D|
      double scale = 0.0;
      const int n = 63;
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          const double x = grid.x_lo + (grid.x_hi - grid.x_lo) * i / n;
          const double y = grid.y_lo + (grid.y_hi - grid.y_lo) * j / n;
          scale = std::max(scale, damping->abs_value(x, y));
        }
      if (scale == 0.0)
        raise(errc::damping_singular, "damping with negative real power vanishes on the box");
      K.floor_ = 1e-12 * scale;
    } else {
      K.floor_ = 0.0;
    }
  }

  const bool dense = (mode == KernelStorageMode::dense) ||
                     (mode == KernelStorageMode::automatic && grid.cells() <= kDenseEntryLimit);
  const bool must_scan = damping && damping->z.real() < 0.0 && K.floor_ == 0.0;

  if (!dense) {
    if (must_scan) {
      // matrix-free entries are recomputed on demand, so the singular-node
      // contract has to be checked up front
      double min_abs = std::numeric_limits<double>::infinity();
#pragma omp parallel for schedule(static) reduction(min : min_abs)
      for (int i = 0; i < grid.mx; ++i)
        for (int j = 0; j < grid.my; ++j)
          min_abs = std::min(min_abs, damping->abs_value(grid.x(i), grid.y(j)));
      if (min_abs < 1e-300)
        raise(errc::damping_singular, "damping vanishes at a grid node and no floor is set");
    }
    return K;
  }

  K.data_.assign(static_cast<size_t>(grid.mx) * grid.my, cd(0.0, 0.0));
  std::atomic<long long> bad_cell{-1};
#pragma omp parallel for schedule(static)
  for (int i = 0; i < grid.mx; ++i) {
    for (int j = 0; j < grid.my; ++j) {
      if (must_scan && damping->abs_value(grid.x(i), grid.y(j)) < 1e-300) {
        long long idx = static_cast<long long>(i) * grid.my + j, cur = bad_cell.load();
        while ((cur == -1 || idx < cur) && !bad_cell.compare_exchange_weak(cur, idx)) {
        }
      }
      K.data_[static_cast<size_t>(i) * grid.my + j] = K.compute(i, j);
    }
  }
  if (bad_cell.load() >= 0) {
    const long long idx = bad_cell.load();
    raise(errc::damping_singular,
          "damping vanishes at grid node (" + std::to_string(idx / grid.my) + ", " +
              std::to_string(idx % grid.my) + ") and no floor is set");
  }
  return K;
}

}  // namespace oscillab
