#include <CLI11.hpp>
#include <fmt/core.h>
#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "oscillab/config.hpp"
#include "oscillab/report.hpp"
#include "oscillab/selftest.hpp"

namespace fs = std::filesystem;

namespace oscillab {
namespace {

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
  bool plot = false;
  double tolerance = -1.0;
  int quadrant = 0;
  std::string p_override;
  double lambda_min = 16.0;
  double lambda_max = 1024.0;
  int lambda_count = 7;
};

// true when the option exists on the parsed subcommand and was supplied
bool given(const CLI::App* sub, const std::string& name) {
  const CLI::Option* o = sub->get_option_no_throw(name);
  return o != nullptr && o->count() > 0;
}

void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) raise(errc::io_error, "cannot create output directory '" + dir + "': " + ec.message());
}

fs::path out_path(const Options& opt, const std::string& name) {
  return fs::path(opt.out_dir) / name;
}

json meta_json(const RunMeta& meta) {
  return json{{"tool", meta.tool},
              {"version", meta.version},
              {"seed", meta.seed},
              {"config_hash", meta.config_hash}};
}

RunMeta make_meta(const json& effective_config, std::uint64_t seed) {
  RunMeta meta;
  meta.seed = seed;
  meta.config_hash = hex64(fnv1a64(canonical_dump(effective_config)));
  return meta;
}

void write_json_file(const fs::path& path, const json& j) {
  write_text_file(path.string(), j.dump(2) + "\n");
}

json bracket_json(const NormBracket& b) {
  return json{{"lower", b.lower},          {"upper", b.upper},
              {"p", rat_string(b.p)},      {"method", b.method},
              {"iterations", b.iterations}, {"residual", b.residual},
              {"converged", b.converged}};
}

json grid_json(const GridSpec& g) {
  return json{{"mx", g.mx},
              {"my", g.my},
              {"at_floor", g.at_floor},
              {"under_resolved", g.under_resolved}};
}

json fit_json(const FitResult& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}};
}

// ------------------------------------------------------------- probe cache

// Derivative probes are pure functions of (phase, box, quadrant); with
// OSCILLAB_CACHE set they are memoized as %.17g text files so repeated sweeps
// skip the 64x64 scan. Cache failures warn and fall through, never abort.
class ProbeCache {
 public:
  ProbeCache() {
    if (const char* dir = std::getenv("OSCILLAB_CACHE"); dir && *dir) dir_ = dir;
  }
  bool enabled() const { return !dir_.empty(); }

  std::optional<ProbeBounds> load(const std::string& key) const {
    if (!enabled()) return std::nullopt;
    const fs::path path = file_for(key);
    std::FILE* f = std::fopen(path.c_str(), "r");
    if (!f) return std::nullopt;
    double lx = 0.0, ly = 0.0;
    const int got = std::fscanf(f, "%lf %lf", &lx, &ly);
    std::fclose(f);
    if (got != 2) {
      fmt::print(stderr, "oscillab: warning: ignoring malformed probe cache {}\n", path.string());
      return std::nullopt;
    }
    return ProbeBounds{lx, ly};
  }

  void store(const std::string& key, const ProbeBounds& pb) const {
    if (!enabled()) return;
    std::error_code ec;
    fs::create_directories(dir_, ec);
    const fs::path path = file_for(key);
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) {
      fmt::print(stderr, "oscillab: warning: cannot write probe cache {}\n", path.string());
      return;
    }
    std::fprintf(f, "%.17g\n%.17g\n", pb.lx, pb.ly);
    std::fclose(f);
  }

 private:
  fs::path file_for(const std::string& key) const {
    return fs::path(dir_) / ("probe-" + hex64(fnv1a64(key)) + ".txt");
  }
  std::string dir_;
};

std::string probe_key(const std::string& describe, double x0, double x1, double y0, double y1,
                      int quadrant) {
  return fmt::format("{}|{}|{}|{}|{}|q{}", describe, format_double(x0), format_double(x1),
                     format_double(y0), format_double(y1), quadrant);
}

// ------------------------------------------------------------- subcommands

int run_analyze(const Options& opt) {
  const json cfg = load_json_file(opt.config_path);
  const AnalyzeConfig ac = analyze_config_from_json(cfg);
  const RunMeta meta = make_meta(cfg, opt.seed);

  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;

  const WeightSignature w = detect_weights(ac.phase);
  fmt::print("phase: {}\n", ac.phase.pretty());
  fmt::print("weights: (p, q) = ({}, {}), D = {}, eta = {}, homogeneity = {}\n", w.p, w.q, w.D,
             rat_string(w.eta()), rat_string(w.homogeneity()));
  out["weights"] = json{{"p", w.p},
                        {"q", w.q},
                        {"D", w.D},
                        {"eta", rat_string(w.eta())},
                        {"homogeneity", rat_string(w.homogeneity())}};

  json sharp = json::array();
  fmt::print("\nsharp predictions per interior monomial (k, l >= 1):\n");
  for (const Term& t : ac.phase.terms()) {
    if (t.k < 1 || t.l < 1) continue;
    const SharpLpPrediction s = sharp_lp(t.k, t.l);
    fmt::print("  (k={}, l={})  p = {:<6} decay = {:<6} coeff power = {}\n", t.k, t.l,
               rat_string(s.p), rat_string(s.decay), rat_string(s.coeff_power));
    sharp.push_back(json{{"k", t.k},
                         {"l", t.l},
                         {"p", rat_string(s.p)},
                         {"decay", rat_string(s.decay)},
                         {"coeff_power", rat_string(s.coeff_power)}});
  }
  if (sharp.empty()) fmt::print("  (none)\n");
  out["sharp"] = sharp;

  const WPoly hess = hessian_xy(ac.phase);
  if (hess.is_zero()) {
    fmt::print("\nhessian d2S/dxdy: 0 (no damping analysis)\n");
    out["hessian"] = json{{"zero", true}};
  } else {
    const WeightSignature hw = detect_weights(hess);
    const Factorization f = factorize(hess, hw);
    fmt::print("\nhessian d2S/dxdy: {}\n", hess.pretty());
    fmt::print("factorization: c = {}, m = {}, n = {}, roots:\n", format_double(f.c), f.m, f.n);
    json roots = json::array();
    for (const RootEntry& r : f.roots) {
      fmt::print("  alpha = {} + {}i  (|alpha| = {}, mult {})\n", format_double(r.alpha.real()),
                 format_double(r.alpha.imag()), format_double(std::abs(r.alpha)), r.multiplicity);
      roots.push_back(json{{"re", r.alpha.real()},
                           {"im", r.alpha.imag()},
                           {"abs", std::abs(r.alpha)},
                           {"mult", r.multiplicity}});
    }
    const std::vector<int> gaps = gap_indices(f, ac.N0);
    fmt::print("gap indices at N0 = {}: {}\n", ac.N0,
               gaps.empty() ? std::string("(none)") : [&] {
                 std::string s;
                 for (int g : gaps) s += (s.empty() ? "" : ", ") + std::to_string(g);
                 return s;
               }());
    out["hessian"] = json{{"zero", false},
                          {"pretty", hess.pretty()},
                          {"weights",
                           json{{"p", hw.p},
                                {"q", hw.q},
                                {"D", hw.D},
                                {"eta", rat_string(hw.eta())}}},
                          {"factorization",
                           json{{"c", f.c},
                                {"m", f.m},
                                {"n", f.n},
                                {"eta", rat_string(f.eta())},
                                {"roots", roots}}},
                          {"gap_indices", gaps}};

    const long long N = f.total_roots();
    const Rat eta = f.eta();
    json damped = json::array();
    if (eta >= Rat(1)) {
      fmt::print("\ndamped decay table (m = {}, n = {}, N = {}, eta = {}):\n", f.m, f.n, N,
                 rat_string(eta));
      for (long long s = 0; s <= N; ++s) {
        const DampingSpec d = damped_l2_exponents(f.m, f.n, N, s, eta);
        const LpPrediction lp = lp_from_damping(f.m, f.n, N, s, eta);
        const Rat theta = interpolation_theta(f.m, f.n, N, s, eta);
        fmt::print("  s={}  gamma = {:<7} Re z = {:<7} Lp: p = {:<6} delta = {:<6} theta = {}\n",
                   s, rat_string(d.gamma), d.re_z ? rat_string(*d.re_z) : std::string("n/a"),
                   rat_string(lp.p), rat_string(lp.delta), rat_string(theta));
        damped.push_back(json{{"s", s},
                              {"gamma", rat_string(d.gamma)},
                              {"re_z", d.re_z ? json(rat_string(*d.re_z)) : json(nullptr)},
                              {"lp_p", rat_string(lp.p)},
                              {"lp_delta", rat_string(lp.delta)},
                              {"theta", rat_string(theta)},
                              {"dual", false}});
      }
    } else {
      // y-dominant weights: use the transposed orientation with nu = 1/eta
      const Rat nu(f.q, f.p);
      fmt::print("\ndamped decay table, dual orientation (m = {}, n = {}, M = {}, nu = {}):\n",
                 f.m, f.n, N, rat_string(nu));
      for (long long s = 0; s <= N; ++s) {
        const DampingSpec d = damped_l2_dual_exponents(f.m, f.n, N, s, nu);
        fmt::print("  s={}  gamma = {:<7} Re z = {}\n", s, rat_string(d.gamma),
                   d.re_z ? rat_string(*d.re_z) : std::string("n/a"));
        damped.push_back(json{{"s", s},
                              {"gamma", rat_string(d.gamma)},
                              {"re_z", d.re_z ? json(rat_string(*d.re_z)) : json(nullptr)},
                              {"dual", true}});
      }
    }
    out["damped"] = damped;
  }

  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "analyze.json"), out);
  return 0;
}

int run_norm(Options& opt, const CLI::App* sub) {
  json cfg = load_json_file(opt.config_path);
  if (given(sub, "--seed")) cfg["seed"] = opt.seed;
  if (given(sub, "--quadrant")) cfg["quadrant"] = opt.quadrant;
  if (given(sub, "--p")) cfg["p"] = opt.p_override;
  const NormRunConfig nc = norm_config_from_json(cfg);
  const RunMeta meta = make_meta(cfg, nc.seed);

  const PhasePtr phase = make_poly_phase(nc.phase);
  const Cutoff cutoff = build_cutoff(nc.cutoff);

  GridSpec grid;
  if (nc.grid_override) {
    grid.x_lo = cutoff.x_lo();
    grid.x_hi = cutoff.x_hi();
    grid.y_lo = cutoff.y_lo();
    grid.y_hi = cutoff.y_hi();
    grid.mx = nc.grid_override->first;
    grid.my = nc.grid_override->second;
  } else {
    const ProbeCache cache;
    const std::string key = probe_key(phase->describe(), cutoff.x_lo(), cutoff.x_hi(),
                                      cutoff.y_lo(), cutoff.y_hi(), 0);
    std::optional<ProbeBounds> probe = cache.load(key);
    if (!probe && cache.enabled()) {
      probe = probe_derivative_sups(*phase, cutoff.x_lo(), cutoff.x_hi(), cutoff.y_lo(),
                                    cutoff.y_hi());
      cache.store(key, *probe);
    }
    grid = auto_grid(*phase, nc.lambda, cutoff, nc.caps, probe);
  }
  if (grid.under_resolved)
    fmt::print(stderr, "oscillab: warning: grid capped below the oscillation scale\n");

  const KernelMatrix K =
      build_kernel(phase, nc.lambda, cutoff, nc.damping, grid, nc.quadrant);

  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;
  out["grid"] = grid_json(grid);
  int exit_code = 0;
  try {
    const NormBracket b = norm_bracket(K, nc.p, nc.seed, nc.restarts);
    fmt::print("norm bracket: [{}, {}]  (p = {}, {} in {} iterations, residual {})\n",
               format_double(b.lower), format_double(b.upper), rat_string(b.p), b.method,
               b.iterations, format_double(b.residual));
    out["bracket"] = bracket_json(b);
  } catch (const NoConvergenceError& e) {
    fmt::print(stderr, "oscillab: norm estimate did not converge: {}\n", e.what());
    out["bracket"] = bracket_json(e.best);
    exit_code = errc_exit_code(errc::no_convergence);
  }
  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "norm.json"), out);
  return exit_code;
}

int run_sweep(Options& opt, const CLI::App* sub) {
  json cfg = load_json_file(opt.config_path);
  if (given(sub, "--seed")) cfg["seed"] = opt.seed;
  if (given(sub, "--tolerance")) cfg["tolerance"] = opt.tolerance;
  if (given(sub, "--quadrant")) cfg["quadrant"] = opt.quadrant;
  if (given(sub, "--p")) cfg["p"] = opt.p_override;
  if (given(sub, "--lambda-min")) cfg["lambdas"]["min"] = opt.lambda_min;
  if (given(sub, "--lambda-max")) cfg["lambdas"]["max"] = opt.lambda_max;
  if (given(sub, "--lambda-count")) cfg["lambdas"]["count"] = opt.lambda_count;

  SweepConfigParse parsed = sweep_config_from_json(cfg);
  SweepConfig& sc = parsed.config;
  const RunMeta meta = make_meta(cfg, sc.seed);

  const ProbeCache cache;
  if (cache.enabled()) {
    const Cutoff cutoff = build_cutoff(sc.cutoff);
    const std::string key = probe_key(sc.phase->describe(), cutoff.x_lo(), cutoff.x_hi(),
                                      cutoff.y_lo(), cutoff.y_hi(), sc.quadrant);
    sc.probe_override = cache.load(key);
    if (!sc.probe_override) {
      sc.probe_override = compute_sweep_probe(sc);
      cache.store(key, *sc.probe_override);
    }
  }

  const DecayFitResult res = decay_sweep(sc);

  fmt::print("{:>10}  {:>13}  {:>13}  {:>9}  flags\n", "lambda", "lower", "upper", "grid");
  for (const SweepPoint& pt : res.points) {
    std::string flags;
    if (pt.grid.at_floor) flags += " floor";
    if (pt.grid.under_resolved) flags += " capped";
    if (!pt.bracket.converged) flags += " no-conv";
    fmt::print("{:>10}  {:>13.6e}  {:>13.6e}  {:>4}x{:<4} {}\n", pt.lambda, pt.bracket.lower,
               pt.bracket.upper, pt.grid.mx, pt.grid.my, flags);
  }
  fmt::print("fit: lower slope {:.4f} (r2 {:.5f}), upper slope {:.4f} (r2 {:.5f})\n",
             res.fit_lower.slope, res.fit_lower.r2, res.fit_upper.slope, res.fit_upper.r2);
  if (res.predicted_decay)
    fmt::print("predicted slope: -{} with tolerance {}\n", rat_string(*res.predicted_decay),
               res.tolerance);
  else
    fmt::print("predicted slope: (none)\n");
  if (res.dropped_floor_point) fmt::print("note: smallest lambda sat on the grid floor; excluded from the fit\n");
  fmt::print("verdict: {}\n", verdict_name(res.verdict));

  json points = json::array();
  for (const SweepPoint& pt : res.points)
    points.push_back(json{{"lambda", pt.lambda},
                          {"bracket", bracket_json(pt.bracket)},
                          {"grid", grid_json(pt.grid)},
                          {"wall_ms", pt.wall_ms}});
  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;
  out["points"] = points;
  out["fit_lower"] = fit_json(res.fit_lower);
  out["fit_upper"] = fit_json(res.fit_upper);
  out["predicted_decay"] =
      res.predicted_decay ? json(rat_string(*res.predicted_decay)) : json(nullptr);
  out["tolerance"] = res.tolerance;
  out["verdict"] = verdict_name(res.verdict);
  out["dropped_floor_point"] = res.dropped_floor_point;
  out["under_resolved"] = res.under_resolved;

  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "sweep.json"), out);
  write_text_file(out_path(opt, "sweep.csv").string(), sweep_csv(res, meta));
  if (opt.plot) {
    const std::string title =
        fmt::format("{}  (p = {})", parsed.phase_poly.pretty(), rat_string(sc.p));
    write_text_file(out_path(opt, "sweep.svg").string(), sweep_svg(res, title));
  }
  return 0;
}

int run_uniformity(Options& opt, const CLI::App* sub) {
  json cfg = load_json_file(opt.config_path);
  if (given(sub, "--seed")) cfg["seed"] = opt.seed;
  if (given(sub, "--p")) cfg["p"] = opt.p_override;
  const UniformityConfig uc = uniformity_config_from_json(cfg);
  const RunMeta meta = make_meta(cfg, uc.seed);

  const UniformityReport rep = uniformity_sweep(uc);
  fmt::print("draws: {}\nmax C-hat: {}\nmedian C-hat: {}\nratio: {}\n", rep.draws.size(),
             format_double(rep.max_c), format_double(rep.median_c), format_double(rep.ratio));

  json draws = json::array();
  for (const UniformityDraw& d : rep.draws)
    draws.push_back(
        json{{"coeffs", d.coeffs}, {"norm_upper", d.norm_upper}, {"c_hat", d.c_hat}});
  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;
  out["draws"] = draws;
  out["max_c_hat"] = rep.max_c;
  out["median_c_hat"] = rep.median_c;
  out["ratio"] = rep.ratio;

  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "uniformity.json"), out);
  write_text_file(out_path(opt, "uniformity.csv").string(), uniformity_csv(rep, meta));
  return 0;
}

int run_counterexample(Options& opt) {
  const json cfg = load_json_file(opt.config_path);
  const CounterexampleConfig cc = counterexample_config_from_json(cfg);
  const RunMeta meta = make_meta(cfg, opt.seed);

  const CounterexampleResult res = counterexample_growth(cc);
  for (size_t i = 0; i < res.K.size(); ++i)
    fmt::print("K = {:>10}  sup |integral| = {}\n", res.K[i], format_double(res.values[i]));
  if (res.fitted)
    fmt::print("fitted growth exponent: {:.4f} (r2 {:.5f})\n", res.exponent, res.r2);
  else
    fmt::print("growth exponent not fitted (need >= 3 positive values)\n");

  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;
  out["K"] = res.K;
  out["values"] = res.values;
  out["exponent"] = res.fitted ? json(res.exponent) : json(nullptr);
  out["r2"] = res.fitted ? json(res.r2) : json(nullptr);
  out["fitted"] = res.fitted;

  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "counterexample.json"), out);
  write_text_file(out_path(opt, "counterexample.csv").string(), counterexample_csv(res, meta));
  return 0;
}

int run_atoms(Options& opt) {
  const json cfg = load_json_file(opt.config_path);
  const AtomImageConfig ac = atoms_config_from_json(cfg);
  const RunMeta meta = make_meta(cfg, opt.seed);

  const AtomImageReport rep = atom_image_l1(ac);
  fmt::print("branch: {} (damped order {}, Re z = {}, additive = {})\n",
             rep.modified_branch ? "modified" : "plain", rep.damping_order,
             format_double(rep.re_z), format_double(rep.additive));
  for (size_t i = 0; i < rep.sizes.size(); ++i)
    fmt::print("|I| = {:<12} L1 image mass = {}\n", format_double(rep.sizes[i]),
               format_double(rep.norms[i]));
  fmt::print("max/min ratio: {}\n", format_double(rep.ratio));

  json out;
  out["meta"] = meta_json(meta);
  out["config"] = cfg;
  out["sizes"] = rep.sizes;
  out["norms"] = rep.norms;
  out["ratio"] = rep.ratio;
  out["modified_branch"] = rep.modified_branch;
  out["additive"] = rep.additive;
  out["re_z"] = rep.re_z;
  out["damping_order"] = rep.damping_order;

  ensure_outdir(opt.out_dir);
  write_json_file(out_path(opt, "atoms.json"), out);
  write_text_file(out_path(opt, "atoms.csv").string(), atoms_csv(rep, meta));
  return 0;
}

int dispatch(CLI::App& app, Options& opt) {
  if (opt.threads > 0) omp_set_num_threads(opt.threads);
  if (app.get_subcommand("analyze")->parsed()) return run_analyze(opt);
  if (auto* s = app.get_subcommand("norm"); s->parsed()) return run_norm(opt, s);
  if (auto* s = app.get_subcommand("sweep"); s->parsed()) return run_sweep(opt, s);
  if (auto* s = app.get_subcommand("uniformity"); s->parsed()) return run_uniformity(opt, s);
  if (app.get_subcommand("counterexample")->parsed()) return run_counterexample(opt);
  if (app.get_subcommand("atoms")->parsed()) return run_atoms(opt);
  if (app.get_subcommand("selftest")->parsed())
    return run_selftest(std::cout, opt.seed) ? 0 : 4;
  return 1;
}

}  // namespace
}  // namespace oscillab

int main(int argc, char** argv) {
  using namespace oscillab;
  CLI::App app{"oscillatory integral operator laboratory"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_config) {
    CLI::Option* c = sub->add_option("--config", opt.config_path, "JSON config file");
    if (needs_config) c->required();
    sub->add_option("--out", opt.out_dir, "output directory (default .)");
    sub->add_option("--seed", opt.seed, "master RNG seed");
    sub->add_option("--threads", opt.threads, "number of OpenMP threads");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "symbolic phase analysis and predictions");
  add_common(analyze, true);

  CLI::App* norm = app.add_subcommand("norm", "single operator norm bracket");
  add_common(norm, true);
  norm->add_option("--quadrant", opt.quadrant, "restrict to quadrant 1..4")
      ->check(CLI::Range(0, 4));
  norm->add_option("--p", opt.p_override, "Lebesgue exponent, e.g. 3/2");

  CLI::App* sweep = app.add_subcommand("sweep", "lambda sweep with decay fit");
  add_common(sweep, true);
  sweep->add_option("--quadrant", opt.quadrant, "restrict to quadrant 1..4")
      ->check(CLI::Range(0, 4));
  sweep->add_option("--p", opt.p_override, "Lebesgue exponent, e.g. 3/2");
  sweep->add_option("--tolerance", opt.tolerance, "verdict slope tolerance");
  sweep->add_option("--lambda-min", opt.lambda_min, "smallest lambda");
  sweep->add_option("--lambda-max", opt.lambda_max, "largest lambda");
  sweep->add_option("--lambda-count", opt.lambda_count, "number of lambdas");
  sweep->add_flag("--plot", opt.plot, "write sweep.svg");

  CLI::App* uniformity = app.add_subcommand("uniformity", "coefficient uniformity experiment");
  add_common(uniformity, true);
  uniformity->add_option("--p", opt.p_override, "Lebesgue exponent, e.g. 3/2");

  CLI::App* counterexample =
      app.add_subcommand("counterexample", "window-integral growth experiment");
  add_common(counterexample, true);

  CLI::App* atoms = app.add_subcommand("atoms", "damped atom image experiment");
  add_common(atoms, true);

  CLI::App* selftest = app.add_subcommand("selftest", "internal consistency battery");
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    return dispatch(app, opt);
  } catch (const Error& e) {
    fmt::print(stderr, "oscillab: error: {}\n", e.what());
    return errc_exit_code(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "oscillab: error: {}\n", e.what());
    return 2;
  }
}
