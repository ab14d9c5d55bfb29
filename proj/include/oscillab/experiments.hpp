#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oscillab/opnorm.hpp"
#include "oscillab/predict.hpp"

namespace oscillab {

// ---------------------------------------------------------------- decay sweep

struct LambdaGrid {
  double min = 16.0;
  double max = 1024.0;
  int count = 7;
  std::vector<double> values() const;  // log-uniform, endpoints included
};

struct SweepConfig {
  PhasePtr phase;
  CutoffSpec cutoff;
  Rat p{2};
  std::optional<DampingOpt> damping;
  LambdaGrid lambdas;
  GridCaps caps;
  std::uint64_t seed = 0;
  int quadrant = 0;
  int restarts = 8;
  double tolerance = -1.0;  // negative = default by p (0.05 at p=2, else 0.07)
  std::optional<Rat> expected_decay;  // overrides the derived prediction
  bool allow_under_resolved = false;
  std::optional<ProbeBounds> probe_override;  // reuse a cached derivative probe

  void validate() const;  // lambda min >= 1, count >= 4, max > min
};

// Derivative sups over the quadrant-clipped cutoff box (the quantity cached
// between sweeps of the same phase and box).
ProbeBounds compute_sweep_probe(const SweepConfig& config);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Ordinary least squares on (x, y) pairs; needs >= 3 points with nonzero
// abscissa variance. R^2 = 1 when the total sum of squares vanishes.
FitResult fit_slope(const std::vector<std::pair<double, double>>& points);

enum class Verdict { consistent, upper_violated, sharper_than_predicted, inconclusive };
const char* verdict_name(Verdict v);

struct SweepPoint {
  double lambda = 0.0;
  NormBracket bracket;
  GridSpec grid;
  double wall_ms = 0.0;
};

struct DecayFitResult {
  std::vector<SweepPoint> points;
  FitResult fit_lower, fit_upper;
  std::optional<Rat> predicted_decay;
  double tolerance = 0.0;
  Verdict verdict = Verdict::inconclusive;
  bool dropped_floor_point = false;  // smallest lambda sat on the grid floor
  bool under_resolved = false;
};

DecayFitResult decay_sweep(const SweepConfig& config);

// Derives the decay prediction for a polynomial phase at exponent p: the
// weighted-homogeneous term with (k+l)/k = p contributes slope -1/(k+l).
std::optional<Rat> derive_decay_prediction(const Phase& phase, const Rat& p);

// ---------------------------------------------------------- uniformity sweep

struct UniformityFamilyTerm {
  int k = 1, l = 1;
  double lo = -1.0, hi = 1.0;  // coefficient draw range
};

struct UniformityConfig {
  std::vector<UniformityFamilyTerm> family;
  int designated = 0;  // index of the term whose coefficient normalizes C-hat
  int draws = 50;
  double lambda = 256.0;
  Rat p{2};
  CutoffSpec cutoff;
  GridCaps caps;
  std::uint64_t seed = 0;
  int restarts = 4;
  // when nonzero for draw d, |coefficient(designated)| is pinned to this value
  std::vector<double> forced_abs;
};

struct UniformityDraw {
  std::vector<double> coeffs;
  double norm_upper = 0.0;
  double c_hat = 0.0;  // norm_upper * |a|^(1/(k+l)) * lambda^(1/(k+l))
};

struct UniformityReport {
  std::vector<UniformityDraw> draws;
  double max_c = 0.0;
  double median_c = 0.0;
  double ratio = 0.0;  // max / median
};

UniformityReport uniformity_sweep(const UniformityConfig& config);

// ------------------------------------------------------------- atom harness

struct AtomSpec {
  int cell_k = 0;        // dyadic cell I_k = [2^(k-1), 2^(k+1)]
  double center = 1.0;   // interval center c_I
  double length = 0.25;  // interval length |I|
  int root_index = 1;    // 1-based index into the sorted Hessian root list
  double lambda = 0.0;
  WPoly phase;
};

// Twisted Haar profile: a(y) = exp(-i lambda S(x0, y)) b(y) with b the
// mean-zero two-step function of height 1/|I|, and x0 = Re(alpha) c_I^eta.
struct Atom {
  AtomSpec spec;
  double x0 = 0.0;
  double eta = 1.0;
  std::vector<cd> sample(const std::vector<double>& y) const;
  // midpoint quadrature of exp(i lambda S(x0, y)) a(y) over the interval;
  // `samples` is rounded up to even so the two steps get equal weight
  cd moment(int samples = 4096) const;
};

Atom make_atom(const AtomSpec& spec);

struct AtomImageConfig {
  WPoly phase;
  int j = 0, k = 0;  // dyadic cell scales for x and y
  int s = 1;         // damping order
  double lambda = 64.0;
  std::vector<double> relative_sizes;  // |I| / 2^k; default 2^-2 .. 2^-8
  bool flat_control = false;  // replace the mean-zero profile by a flat one
  int N0 = 2;
  int root_index = 0;  // 0 = last damped root
};

struct AtomImageReport {
  std::vector<double> sizes;  // absolute |I|
  std::vector<double> norms;  // L1(dx) mass of the damped image
  double ratio = 0.0;         // max/min over the series
  bool modified_branch = false;
  double additive = 0.0;  // shoulder of the modified damping (0 on the plain branch)
  double re_z = 0.0;
  int damping_order = 0;  // roots actually damped after block completion
};

AtomImageReport atom_image_l1(const AtomImageConfig& config);

// ------------------------------------------------- counterexample + radial

struct CounterexampleConfig {
  double a = 1.0;
  double b = 0.5;
  int N = 1;
  double eps0 = 0.1;
  std::vector<double> K;  // increasing, >= 16
  bool allow_out_of_regime = false;  // admit a > 1 or b >= 1 for control runs

  void validate() const;
};

struct CounterexampleResult {
  std::vector<double> K;
  std::vector<double> values;  // sup over the rho window of |integral|
  double exponent = 0.0;       // fitted log-log slope in K
  double r2 = 0.0;
  bool fitted = false;
};

CounterexampleResult counterexample_growth(const CounterexampleConfig& config);

struct HigherDimTerm {
  long long k = 1, l = 1;
  double sphere_x = 1.0, sphere_y = 1.0;  // angular integral factors
};

struct RadialPhaseInput {
  std::vector<HigherDimTerm> terms;
  long long m = 1, n = 1;    // radial homogeneity orders
  long long dim_x = 1, dim_y = 1;
  int designated = 0;
};

struct RadialReduction {
  PhasePtr phase;  // one-dimensional generalized phase in the radii
  Rat p;
  Rat gamma;
};

RadialReduction radial_reduce(const RadialPhaseInput& input);

}  // namespace oscillab
