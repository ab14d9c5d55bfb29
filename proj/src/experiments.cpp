#include "oscillab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oscillab/util.hpp"

namespace oscillab {

// ---------------------------------------------------------------- decay sweep

std::vector<double> LambdaGrid::values() const {
  std::vector<double> out;
  const double e0 = std::log2(min), e1 = std::log2(max);
  for (int i = 0; i < count; ++i)
    out.push_back(std::exp2(e0 + (e1 - e0) * i / (count - 1)));
  return out;
}

void SweepConfig::validate() const {
  if (!phase) raise(errc::invalid_argument, "sweep needs a phase");
  if (!(lambdas.min >= 1.0)) raise(errc::invalid_argument, "sweep requires lambda >= 1");
  if (!(lambdas.max > lambdas.min))
    raise(errc::invalid_argument, "sweep requires an increasing lambda range");
  if (lambdas.count < 4) raise(errc::invalid_argument, "sweep requires at least 4 lambda points");
  if (quadrant < 0 || quadrant > 4) raise(errc::invalid_argument, "quadrant must be 0..4");
  if (p < Rat(1)) raise(errc::invalid_argument, "Lebesgue exponent must be >= 1");
}

FitResult fit_slope(const std::vector<std::pair<double, double>>& points) {
  const size_t n = points.size();
  if (n < 3) raise(errc::degenerate_abscissae, "least squares needs at least 3 points");
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) raise(errc::degenerate_abscissae, "abscissae have zero variance");
  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : points) {
    const double e = y - (out.intercept + out.slope * x);
    ss_res += e * e;
  }
  out.r2 = (syy == 0.0) ? 1.0 : 1.0 - ss_res / syy;
  return out;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::upper_violated: return "upper_violated";
    case Verdict::sharper_than_predicted: return "sharper_than_predicted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<Rat> derive_decay_prediction(const Phase& phase, const Rat& p) {
  const auto* poly_phase = dynamic_cast<const PolyPhase*>(&phase);
  if (!poly_phase) return std::nullopt;
  try {
    detect_weights(poly_phase->poly());
  } catch (const Error&) {
    return std::nullopt;
  }
  for (const Term& t : poly_phase->poly().terms()) {
    if (t.k < 1 || t.l < 1) continue;
    if (Rat(t.k + t.l, t.k) == p) return Rat(1, t.k + t.l);
  }
  return std::nullopt;
}

namespace {

struct Box {
  double x0, x1, y0, y1;
};

Box quadrant_clip(const Cutoff& cutoff, int quadrant) {
  Box b{cutoff.x_lo(), cutoff.x_hi(), cutoff.y_lo(), cutoff.y_hi()};
  if (quadrant == 1 || quadrant == 4) b.x0 = std::max(b.x0, 0.0);
  if (quadrant == 2 || quadrant == 3) b.x1 = std::min(b.x1, 0.0);
  if (quadrant == 1 || quadrant == 2) b.y0 = std::max(b.y0, 0.0);
  if (quadrant == 3 || quadrant == 4) b.y1 = std::min(b.y1, 0.0);
  if (!(b.x0 < b.x1 && b.y0 < b.y1))
    raise(errc::invalid_argument, "cutoff support does not meet the requested quadrant");
  return b;
}

}  // namespace

ProbeBounds compute_sweep_probe(const SweepConfig& config) {
  const Cutoff cutoff = build_cutoff(config.cutoff);
  const Box box = quadrant_clip(cutoff, config.quadrant);
  return probe_derivative_sups(*config.phase, box.x0, box.x1, box.y0, box.y1);
}

DecayFitResult decay_sweep(const SweepConfig& config) {
  config.validate();
  const Cutoff cutoff = build_cutoff(config.cutoff);
  const Box box = quadrant_clip(cutoff, config.quadrant);
  const ProbeBounds probe =
      config.probe_override ? *config.probe_override
                            : probe_derivative_sups(*config.phase, box.x0, box.x1, box.y0, box.y1);

  DecayFitResult out;
  const std::vector<double> lambdas = config.lambdas.values();
  for (size_t idx = 0; idx < lambdas.size(); ++idx) {
    Stopwatch timer;
    SweepPoint pt;
    pt.lambda = lambdas[idx];
    pt.grid = auto_grid_box(*config.phase, pt.lambda, box.x0, box.x1, box.y0, box.y1,
                            config.caps, probe);
    const KernelMatrix K = build_kernel(config.phase, pt.lambda, cutoff, config.damping, pt.grid,
                                        config.quadrant);
    try {
      pt.bracket = norm_bracket(K, config.p, mix_seed(config.seed, idx), config.restarts);
    } catch (const NoConvergenceError& e) {
      pt.bracket = e.best;
    }
    pt.wall_ms = timer.elapsed_ms();
    out.under_resolved = out.under_resolved || pt.grid.under_resolved;
    out.points.push_back(std::move(pt));
  }

  // The grid floor stops small-lambda points from resolving their actual decay;
  // the smallest point is excluded from the fit when it sat on the floor and
  // enough points remain.
  size_t first = 0;
  if (out.points.front().grid.at_floor && out.points.size() >= 4) {
    first = 1;
    out.dropped_floor_point = true;
  }
  std::vector<std::pair<double, double>> lo_pts, hi_pts;
  for (size_t i = first; i < out.points.size(); ++i) {
    const SweepPoint& pt = out.points[i];
    if (pt.bracket.lower > 0.0)
      lo_pts.emplace_back(std::log2(pt.lambda), std::log2(pt.bracket.lower));
    if (pt.bracket.upper > 0.0)
      hi_pts.emplace_back(std::log2(pt.lambda), std::log2(pt.bracket.upper));
  }
  out.fit_lower = fit_slope(lo_pts);
  out.fit_upper = fit_slope(hi_pts);

  out.predicted_decay =
      config.expected_decay ? config.expected_decay : derive_decay_prediction(*config.phase, config.p);
  out.tolerance = config.tolerance >= 0.0 ? config.tolerance
                                          : (config.p == Rat(2) ? 0.05 : 0.07);

  if (out.under_resolved && !config.allow_under_resolved) {
    out.verdict = Verdict::inconclusive;
  } else if (!out.predicted_decay) {
    out.verdict = Verdict::inconclusive;
  } else {
    const double target = -to_double(*out.predicted_decay);
    const double lo = std::min(out.fit_lower.slope, out.fit_upper.slope);
    const double hi = std::max(out.fit_lower.slope, out.fit_upper.slope);
    if (lo > target + out.tolerance)
      out.verdict = Verdict::upper_violated;
    else if (hi < target - out.tolerance)
      out.verdict = Verdict::sharper_than_predicted;
    else
      out.verdict = Verdict::consistent;
  }
  return out;
}

// ---------------------------------------------------------- uniformity sweep

UniformityReport uniformity_sweep(const UniformityConfig& config) {
  if (config.family.empty()) raise(errc::invalid_argument, "uniformity sweep needs a family");
  if (config.designated < 0 || config.designated >= static_cast<int>(config.family.size()))
    raise(errc::invalid_argument, "designated term index out of range");
  if (config.draws < 1) raise(errc::invalid_argument, "uniformity sweep needs at least one draw");
  if (!(config.lambda >= 1.0)) raise(errc::invalid_argument, "uniformity sweep needs lambda >= 1");
  for (size_t i = 0; i < config.family.size(); ++i)
    for (size_t j = i + 1; j < config.family.size(); ++j)
      if (config.family[i].k == config.family[j].k && config.family[i].l == config.family[j].l)
        raise(errc::invalid_argument, "family terms must have distinct exponent pairs");
  const UniformityFamilyTerm& des = config.family[config.designated];
  if (des.k < 1 || des.l < 1)
    raise(errc::invalid_argument, "designated term needs k, l >= 1");

  const Cutoff cutoff = build_cutoff(config.cutoff);
  UniformityReport report;
  for (int d = 0; d < config.draws; ++d) {
    SplitMix64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(d)));
    UniformityDraw draw;
    WPoly phase_poly;
    for (size_t t = 0; t < config.family.size(); ++t) {
      double c = 0.0;
      for (int tries = 0; tries < 100 && std::abs(c) < 1e-8; ++tries)
        c = rng.uniform(config.family[t].lo, config.family[t].hi);
      if (static_cast<int>(t) == config.designated && d < static_cast<int>(config.forced_abs.size()) &&
          config.forced_abs[d] > 0.0)
        c = std::copysign(config.forced_abs[d], c);
      draw.coeffs.push_back(c);
      phase_poly.add_term(config.family[t].k, config.family[t].l, c);
    }
    const PhasePtr phase = make_poly_phase(phase_poly);
    const GridSpec grid = auto_grid(*phase, config.lambda, cutoff, config.caps);
    const KernelMatrix K = build_kernel(phase, config.lambda, cutoff, std::nullopt, grid);
    double upper = 0.0;
    if (config.p == Rat(2)) {
      try {
        upper = opnorm_l2(K, L2Options{.seed = mix_seed(config.seed, 1000 + d)}).upper;
      } catch (const NoConvergenceError& e) {
        upper = e.best.upper;
      }
    } else {
      upper = opnorm_lp_upper(K, config.p, mix_seed(config.seed, 1000 + d));
    }
    draw.norm_upper = upper;
    const double inv_kl = 1.0 / (des.k + des.l);
    draw.c_hat = upper * std::pow(std::abs(draw.coeffs[config.designated]), inv_kl) *
                 std::pow(config.lambda, inv_kl);
    report.draws.push_back(std::move(draw));
  }

  std::vector<double> values;
  for (const UniformityDraw& d : report.draws) values.push_back(d.c_hat);
  std::sort(values.begin(), values.end());
  report.max_c = values.back();
  const size_t n = values.size();
  report.median_c = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  report.ratio = report.max_c / report.median_c;
  return report;
}

// ------------------------------------------------------------- atom harness

std::vector<cd> Atom::sample(const std::vector<double>& y) const {
  std::vector<cd> out(y.size());
  const double lo = spec.center - spec.length / 2.0;
  const double hi = spec.center + spec.length / 2.0;
  const double height = 1.0 / spec.length;
  for (size_t i = 0; i < y.size(); ++i) {
    double b = 0.0;
    if (y[i] >= lo && y[i] <= hi) b = (y[i] < spec.center) ? height : -height;
    if (b == 0.0) {
      out[i] = cd(0.0, 0.0);
      continue;
    }
    out[i] = std::polar(1.0, -spec.lambda * spec.phase.eval(x0, y[i])) * b;
  }
  return out;
}

cd Atom::moment(int samples) const {
  if (samples < 2) raise(errc::invalid_argument, "moment quadrature needs at least 2 samples");
  const int n = samples + (samples % 2);  // even: the two steps get equal weight
  const double lo = spec.center - spec.length / 2.0;
  const double step = spec.length / n;
  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = lo + (i + 0.5) * step;
  const std::vector<cd> a = sample(y);
  cd acc(0.0, 0.0);
  for (int i = 0; i < n; ++i)
    acc += std::polar(1.0, spec.lambda * spec.phase.eval(x0, y[i])) * a[i] * step;
  return acc;
}

Atom make_atom(const AtomSpec& spec) {
  if (!(spec.length > 0.0)) raise(errc::invalid_argument, "atom interval must have positive length");
  const double cell_lo = std::exp2(spec.cell_k - 1);
  const double cell_hi = std::exp2(spec.cell_k + 1);
  const double slack = 1e-12 * cell_hi;
  if (spec.center - spec.length / 2.0 < cell_lo - slack ||
      spec.center + spec.length / 2.0 > cell_hi + slack)
    raise(errc::interval_out_of_range, "atom interval leaves its dyadic cell");

  Atom atom;
  atom.spec = spec;
  if (spec.lambda == 0.0) {
    atom.x0 = spec.center;  // the twist is trivial; no root geometry needed
    return atom;
  }
  const WPoly h = hessian_xy(spec.phase);
  const WeightSignature w = detect_weights(h);
  const Factorization f = factorize(h, w);
  const std::vector<cd> roots = f.eta_roots();
  if (spec.root_index < 1 || spec.root_index > static_cast<int>(roots.size()))
    raise(errc::invalid_argument, "atom root index out of range");
  atom.eta = to_double(f.eta());
  atom.x0 = roots[spec.root_index - 1].real() * pow_real(spec.center, atom.eta);
  return atom;
}

AtomImageReport atom_image_l1(const AtomImageConfig& config) {
  if (config.s < 1) raise(errc::invalid_argument, "atom image needs damping order s >= 1");
  const WPoly h = hessian_xy(config.phase);
  const WeightSignature w = detect_weights(h);
  const Factorization f = factorize(h, w);
  const std::vector<cd> roots = f.eta_roots();
  const int N = static_cast<int>(roots.size());
  if (config.s > N) raise(errc::invalid_argument, "damping order exceeds the root count");
  const double eta = to_double(f.eta());

  const DampingSelection sel = select_damping_indices_of(roots, config.s);
  int s_eff = static_cast<int>(sel.indices.size());
  const cd alpha_s = roots[s_eff - 1];

  // regime check: the x-cell scale must be comparable to |alpha_s| y^eta on the cell
  const double pj = std::exp2(config.j);
  const double reach_lo = std::abs(alpha_s) * std::exp2((config.k - 1) * eta - 2.0);
  const double reach_hi = std::abs(alpha_s) * std::exp2((config.k + 1) * eta + 2.0);
  if (!(pj >= reach_lo && pj <= reach_hi))
    raise(errc::regime_violation,
          "x-cell 2^" + std::to_string(config.j) + " is outside [" + format_double(reach_lo) +
              ", " + format_double(reach_hi) + "] where the damped bound applies");

  double spread = 0.0;
  for (int t = 0; t < s_eff; ++t) spread = std::max(spread, std::abs(roots[t] - alpha_s));
  const bool modified = (f.m == 0) && (spread < std::abs(alpha_s) / 4.0);

  AtomImageReport report;
  DampingOpt damping;
  int s_used = s_eff;
  if (modified) {
    // clustered small roots: damp the whole leading block and add the
    // oscillation shoulder so the weight never vanishes
    const std::vector<int> gaps = gap_indices_of(roots, config.N0);
    const int t1 = gaps.empty() ? N : gaps.front();
    s_used = std::max(s_eff, t1);
    double big_root_product = 1.0;
    for (int t = s_used; t < N; ++t)
      big_root_product *= std::abs(roots[t]) * std::exp2(config.k * eta);
    const double amplitude = std::exp2(config.j * f.m) * std::exp2(config.k * f.n) *
                             big_root_product;
    const cd alpha_block = roots[s_used - 1];
    double additive = 0.0;
    if (config.lambda != 0.0) {
      const double base = std::abs(config.lambda) / std::abs(alpha_block) *
                          std::exp2(-config.k * (eta - 1.0)) * amplitude;
      additive = std::pow(base, -static_cast<double>(s_used) / (s_used + 2.0));
    }
    ModifiedDamping md;
    md.additive = additive;
    md.roots.assign(roots.begin(), roots.begin() + s_used);
    md.eta = eta;
    damping.form = md;
    damping.z = cd(-1.0 / s_used, 0.0);
    report.modified_branch = true;
    report.additive = additive;
  } else {
    ProductDamping pd;
    pd.m = f.m;
    pd.roots.assign(roots.begin(), roots.begin() + s_used);
    pd.eta = eta;
    damping.form = pd;
    damping.z = cd(-1.0 / (f.m + s_used), 0.0);
  }
  damping.floor_eps = -1.0;  // automatic floor guards root crossings inside the cell
  report.re_z = damping.z.real();
  report.damping_order = s_used;

  const PhasePtr phase = make_poly_phase(config.phase);
  const CutoffSpec cell_cutoff{.kind = CutoffKind::dyadic_cell, .j = config.j, .k = config.k};
  const Cutoff cutoff = build_cutoff(cell_cutoff);
  const double x_lo = std::exp2(config.j - 1), x_hi = std::exp2(config.j + 1);
  const double center = std::exp2(config.k);

  std::vector<double> rel = config.relative_sizes;
  if (rel.empty())
    for (int e = 2; e <= 8; ++e) rel.push_back(std::exp2(-e));
  const int root_index = config.root_index > 0 ? config.root_index : s_used;

  for (double r : rel) {
    if (!(r > 0.0 && r <= 0.25))
      raise(errc::invalid_argument, "relative atom size must lie in (0, 1/4]");
    const double len = r * center;
    AtomSpec aspec;
    aspec.cell_k = config.k;
    aspec.center = center;
    aspec.length = len;
    aspec.root_index = root_index;
    aspec.lambda = config.lambda;
    aspec.phase = config.phase;
    const Atom atom = make_atom(aspec);

    const double y_lo = center - len / 2.0, y_hi = center + len / 2.0;
    const ProbeBounds pb = probe_derivative_sups(*phase, x_lo, x_hi, y_lo, y_hi);
    auto pick = [&](double sup, double width, int floor_pts) {
      const double raw = std::ceil(8.0 * std::abs(config.lambda) * sup * width / (2.0 * M_PI));
      int m = static_cast<int>(std::clamp(raw, static_cast<double>(floor_pts), 65536.0));
      return m + (m % 2);  // even counts keep the midpoint grid symmetric about c_I
    };
    GridSpec grid;
    grid.x_lo = x_lo;
    grid.x_hi = x_hi;
    grid.y_lo = y_lo;
    grid.y_hi = y_hi;
    grid.mx = pick(pb.lx, x_hi - x_lo, 2048);
    grid.my = pick(pb.ly, len, 512);

    const KernelMatrix K = build_kernel(phase, config.lambda, cutoff, damping, grid, 0,
                                        KernelStorageMode::matrix_free);
    std::vector<double> ys(grid.my);
    for (int jj = 0; jj < grid.my; ++jj) ys[jj] = grid.y(jj);
    std::vector<cd> a = atom.sample(ys);
    if (config.flat_control) {
      // keep the twist, remove the sign flip: the vanishing moment disappears
      const double height = 1.0 / len;
      for (int jj = 0; jj < grid.my; ++jj) {
        const double y = ys[jj];
        if (y >= y_lo && y <= y_hi)
          a[jj] = std::polar(1.0, -config.lambda * config.phase.eval(atom.x0, y)) * height;
        else
          a[jj] = cd(0.0, 0.0);
      }
    }
    std::vector<cd> image(grid.mx);
    K.apply(a.data(), image.data());
    double mass = 0.0;
    for (int i = 0; i < grid.mx; ++i) mass += std::abs(image[i]);
    mass *= grid.dx();
    report.sizes.push_back(len);
    report.norms.push_back(mass);
  }
  const auto [lo_it, hi_it] = std::minmax_element(report.norms.begin(), report.norms.end());
  report.ratio = (*lo_it > 0.0) ? (*hi_it / *lo_it) : std::numeric_limits<double>::infinity();
  return report;
}

// ------------------------------------------------- counterexample + radial

void CounterexampleConfig::validate() const {
  if (!(a > 0.0 && b > 0.0)) raise(errc::invalid_argument, "exponents a, b must be positive");
  if (N < 1) raise(errc::invalid_argument, "phase power N must be >= 1");
  if (!(eps0 >= 0.0 && eps0 < 1.0))
    raise(errc::invalid_argument, "window width eps0 must lie in [0, 1)");
  if (K.empty()) raise(errc::invalid_argument, "need at least one K value");
  double prev = 0.0;
  for (double k : K) {
    if (!(k >= 16.0)) raise(errc::invalid_argument, "K values must be >= 16");
    if (!(k > prev)) raise(errc::invalid_argument, "K values must increase");
    prev = k;
  }
  if (!allow_out_of_regime && !(a <= 1.0 && b < 1.0))
    raise(errc::hypothesis_violated,
          "growth construction requires a <= 1 and b < 1 (override to run controls)");
}

CounterexampleResult counterexample_growth(const CounterexampleConfig& config) {
  config.validate();
  CounterexampleResult out;
  out.K = config.K;
  for (double Kv : config.K) {
    if (config.eps0 == 0.0) {
      out.values.push_back(0.0);  // the test function has empty support
      continue;
    }
    const double len = config.eps0 * std::pow(Kv, 1.0 - config.b);
    const double rho0 = std::pow(Kv, config.b / config.a);

    // resolve the radial oscillation of (rho^a - r^b)^N across the window
    double sup_deriv = 0.0;
    for (int pi = 0; pi <= 32; ++pi) {
      const double r = Kv + len * pi / 32.0;
      for (double rho : {rho0, rho0 + config.eps0}) {
        const double base = std::pow(rho, config.a) - std::pow(r, config.b);
        const double d = config.N * ipow(std::abs(base), config.N - 1) * config.b *
                         std::pow(r, config.b - 1.0);
        sup_deriv = std::max(sup_deriv, std::abs(d));
      }
    }
    const double raw = std::ceil(8.0 * sup_deriv * len / (2.0 * M_PI));
    const int n = static_cast<int>(std::clamp(raw, 512.0, 4194304.0));
    const double dr = len / n;

    double best = 0.0;
    for (int t = 0; t < 64; ++t) {
      const double rho = rho0 + config.eps0 * t / 63.0;
      const double rho_a = std::pow(rho, config.a);
      cd acc(0.0, 0.0);
      for (int i = 0; i < n; ++i) {
        const double r = Kv + (i + 0.5) * dr;
        const double phase = ipow(rho_a - std::pow(r, config.b), config.N);
        acc += std::polar(dr, phase);
      }
      best = std::max(best, std::abs(acc));
    }
    out.values.push_back(best);
  }

  bool positive = out.K.size() >= 3;
  for (double v : out.values) positive = positive && v > 0.0;
  if (positive) {
    std::vector<std::pair<double, double>> pts;
    for (size_t i = 0; i < out.K.size(); ++i)
      pts.emplace_back(std::log2(out.K[i]), std::log2(out.values[i]));
    const FitResult fit = fit_slope(pts);
    out.exponent = fit.slope;
    out.r2 = fit.r2;
    out.fitted = true;
  } else {
    out.exponent = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

RadialReduction radial_reduce(const RadialPhaseInput& input) {
  if (input.terms.empty()) raise(errc::invalid_argument, "radial reduction needs terms");
  if (input.designated < 0 || input.designated >= static_cast<int>(input.terms.size()))
    raise(errc::invalid_argument, "designated term index out of range");
  if (input.m < input.dim_x || input.n < input.dim_y)
    raise(errc::hypothesis_violated,
          "radial homogeneity requires m >= dim_x and n >= dim_y (got m=" +
              std::to_string(input.m) + ", dim_x=" + std::to_string(input.dim_x) +
              ", n=" + std::to_string(input.n) + ", dim_y=" + std::to_string(input.dim_y) + ")");
  const HigherDimTerm& des = input.terms[input.designated];
  if (des.sphere_x * des.sphere_y == 0.0)
    raise(errc::non_integrable_sphere_factor,
          "designated term vanishes after angular integration");

  std::vector<GenTerm> gen;
  for (const HigherDimTerm& t : input.terms) {
    const double c = t.sphere_x * t.sphere_y;
    if (c == 0.0) continue;
    gen.push_back(GenTerm{c, static_cast<double>(t.k) * input.m / input.dim_x,
                          static_cast<double>(t.l) * input.n / input.dim_y});
  }
  const HigherDimPrediction pred =
      higher_dim_prediction(des.k, des.l, input.m, input.n, input.dim_x, input.dim_y);
  RadialReduction out;
  out.phase = std::make_shared<GeneralizedPhase>(std::move(gen));
  out.p = pred.p;
  out.gamma = pred.gamma;
  return out;
}

}  // namespace oscillab
