#pragma once

#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "oscillab/cutoff.hpp"
#include "oscillab/grid.hpp"
#include "oscillab/phase.hpp"

namespace oscillab {

// |D(x,y)|^z damping in one of three carriers. Product and modified forms use
// the even extension |y|^eta so that non-integer weight ratios stay defined on
// the whole plane (the modeled operators live on y > 0).
struct PolyDamping {
  WPoly d;
};
struct ProductDamping {
  int m = 0;
  std::vector<cd> roots;  // factors x - alpha |y|^eta
  double eta = 1.0;
};
struct ModifiedDamping {
  double additive = 0.0;  // lower shoulder added to the product
  std::vector<cd> roots;
  double eta = 1.0;
};

struct DampingOpt {
  std::variant<PolyDamping, ProductDamping, ModifiedDamping> form;
  cd z{0.0, 0.0};
  // Floor for |D| when Re z < 0: positive = explicit floor, zero = none (any
  // grid node with |D| < 1e-300 raises DampingSingular), negative = automatic
  // floor 1e-12 times the probed sup of |D| on the box.
  double floor_eps = -1.0;

  double abs_value(double x, double y) const;
};

inline constexpr long long kDenseEntryLimit = 1LL << 24;

enum class KernelStorageMode { automatic, dense, matrix_free };

// Discretized kernel entry(i, j) = exp(i lambda S(x_i, y_j)) * |D|^z * phi * dy
// on the midpoint grid; the y-step is folded into the entries exactly once so
// row sums of |entries| are already L1(dy) integrals in y.
class KernelMatrix {
 public:
  int rows() const { return grid_.mx; }
  int cols() const { return grid_.my; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  bool is_dense() const { return !data_.empty(); }
  const GridSpec& grid() const { return grid_; }

  cd entry(int i, int j) const;

  // out = K in (length rows). The parallel path splits rows across threads and
  // keeps each row's accumulation serial, so results are bitwise identical to
  // apply_serial at any thread count.
  void apply(const cd* in, cd* out) const;
  void apply_serial(const cd* in, cd* out) const;
  // out = K^H in (length cols)
  void apply_adjoint(const cd* in, cd* out) const;
  void apply_adjoint_serial(const cd* in, cd* out) const;

  double max_abs_row_sum() const;  // max_i sum_j |K_ij|
  double max_abs_col_sum() const;  // max_j sum_i |K_ij|

  static KernelMatrix from_dense(std::vector<cd> entries, int rows, int cols, double dx = 1.0,
                                 double dy = 1.0);

 private:
  friend KernelMatrix build_kernel(PhasePtr, double, const Cutoff&,
                                   const std::optional<DampingOpt>&, const GridSpec&, int,
                                   KernelStorageMode);
  cd compute(int i, int j) const;

  GridSpec grid_;
  double dx_ = 1.0, dy_ = 1.0;
  std::vector<cd> data_;  // dense row-major; empty in matrix-free mode

  PhasePtr phase_;
  std::optional<Cutoff> cutoff_;
  std::optional<DampingOpt> damping_;
  double lambda_ = 0.0;
  int quadrant_ = 0;
  double floor_ = 0.0;
};

// quadrant: 0 = whole plane, 1..4 = the usual closed quadrants as a mask on phi.
KernelMatrix build_kernel(PhasePtr phase, double lambda, const Cutoff& cutoff,
                          const std::optional<DampingOpt>& damping, const GridSpec& grid,
                          int quadrant = 0, KernelStorageMode mode = KernelStorageMode::automatic);

}  // namespace oscillab
