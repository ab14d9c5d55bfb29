#include "oscillab/config.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "oscillab/report.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace oscillab {
namespace {

// ----------------------------------------------------------- rational fields

TEST(RatJson, AcceptedForms) {
  EXPECT_EQ(rat_from_json(json(3), "t"), Rat(3));
  EXPECT_EQ(rat_from_json(json(4.0), "t"), Rat(4));  // integral floats stay exact
  EXPECT_EQ(rat_from_json(json("3/2"), "t"), Rat(3, 2));
  EXPECT_EQ(rat_from_json(json("-7"), "t"), Rat(-7));
  EXPECT_EQ(rat_from_json(json::array({3, 4}), "t"), Rat(3, 4));
  EXPECT_EQ(rat_from_json(json::array({"3", "4"}), "t"), Rat(3, 4));
}

TEST(RatJson, RejectedForms) {
  EXPECT_RAISES(rat_from_json(json(0.75), "t"), errc::parse_error);
  EXPECT_RAISES(rat_from_json(json::array({1, 0}), "t"), errc::parse_error);
  EXPECT_RAISES(rat_from_json(json::array({"1/2", 2}), "t"), errc::parse_error);
  EXPECT_RAISES(rat_from_json(json::object(), "t"), errc::parse_error);
  EXPECT_RAISES(rat_from_json(json("abc"), "t"), errc::parse_error);
}

TEST(RatJson, RoundTrip) {
  for (const Rat& r : {Rat(3), Rat(-5, 4), Rat(7, 2), Rat(0)})
    EXPECT_EQ(rat_from_json(rat_to_json(r), "t"), r);
  EXPECT_TRUE(rat_to_json(Rat(3)).is_number_integer());
  EXPECT_EQ(rat_to_json(Rat(3, 2)), json::array({"3", "2"}));
}

// ---------------------------------------------------------------- polynomials

TEST(WPolyJson, RoundTripPreservesExactness) {
  WPoly p;
  p.add_term(2, 1, Rat(1, 2));
  p.add_term(0, 3, 0.25);
  p.add_term(1, 1, Rat(-2));
  const WPoly q = wpoly_from_json(wpoly_to_json(p), "t");
  ASSERT_EQ(q.terms().size(), 3u);
  ASSERT_NE(q.find(2, 1), nullptr);
  ASSERT_TRUE(q.find(2, 1)->exact.has_value());
  EXPECT_EQ(*q.find(2, 1)->exact, Rat(1, 2));
  ASSERT_NE(q.find(0, 3), nullptr);
  EXPECT_FALSE(q.find(0, 3)->exact.has_value());  // float coefficients stay floats
  EXPECT_DOUBLE_EQ(q.find(0, 3)->a, 0.25);
  ASSERT_TRUE(q.find(1, 1)->exact.has_value());
  EXPECT_EQ(*q.find(1, 1)->exact, Rat(-2));
}

TEST(WPolyJson, RejectsMalformedTerms) {
  auto parse = [](const char* text) { return wpoly_from_json(parse_json_text(text), "t"); };
  EXPECT_RAISES(parse(R"({"terms": []})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": 3})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": 1, "l": 1}]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": -1, "l": 1, "a": 1}]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": 1, "l": 1, "a": 1, "b": 2}]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": 1, "l": 1, "a": 1}, {"k": 1, "l": 1, "a": 2}]})"),
                errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": 1, "l": 1, "a": 0}]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"terms": [{"k": 1, "l": 1, "a": 1}], "extra": 1})"), errc::parse_error);
}

// -------------------------------------------------------------------- cutoffs

TEST(CutoffJson, RoundTripsEveryKind) {
  CutoffSpec bump;
  bump.kind = CutoffKind::tensor_bump;
  bump.x0 = -2.0;
  bump.x1 = 3.0;
  bump.y0 = 0.5;
  bump.y1 = 2.0;
  bump.plateau = 0.25;
  CutoffSpec radial = bump;
  radial.kind = CutoffKind::radial_bump;
  CutoffSpec box = bump;
  box.kind = CutoffKind::indicator_box;
  CutoffSpec cell;
  cell.kind = CutoffKind::dyadic_cell;
  cell.j = 1;
  cell.k = -1;
  CutoffSpec trap;
  trap.kind = CutoffKind::curved_trapezoid;
  trap.x0 = 0.0;
  trap.x1 = 1.0;
  trap.lower_edge.coeff = {0.0};
  trap.upper_edge.coeff = {0.0, 1.0};

  for (const CutoffSpec& spec : {bump, radial, box, cell, trap}) {
    const CutoffSpec back = cutoff_from_json(cutoff_to_json(spec), "t");
    EXPECT_EQ(back.kind, spec.kind);
    if (spec.kind == CutoffKind::dyadic_cell) {
      EXPECT_EQ(back.j, spec.j);
      EXPECT_EQ(back.k, spec.k);
      continue;
    }
    EXPECT_DOUBLE_EQ(back.x0, spec.x0);
    EXPECT_DOUBLE_EQ(back.x1, spec.x1);
    if (spec.kind == CutoffKind::curved_trapezoid) {
      EXPECT_EQ(back.lower_edge.coeff, spec.lower_edge.coeff);
      EXPECT_EQ(back.upper_edge.coeff, spec.upper_edge.coeff);
    } else {
      EXPECT_DOUBLE_EQ(back.y0, spec.y0);
      EXPECT_DOUBLE_EQ(back.y1, spec.y1);
    }
    if (spec.kind == CutoffKind::tensor_bump || spec.kind == CutoffKind::radial_bump)
      EXPECT_DOUBLE_EQ(back.plateau, spec.plateau);
  }
}

TEST(CutoffJson, RejectsMismatchedKeys) {
  auto parse = [](const char* text) { return cutoff_from_json(parse_json_text(text), "t"); };
  EXPECT_RAISES(parse(R"({"kind": "moebius"})"), errc::unsupported_kind);
  EXPECT_RAISES(parse(R"({"kind": "tensor_bump", "j": 1})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "dyadic_cell", "j": 1})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "curved_trapezoid", "x": [0, 1], "lower": [0]})"),
                errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "tensor_bump", "x": [0, 1, 2]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "tensor_bump", "window": 1})"), errc::parse_error);
}

// -------------------------------------------------------------------- damping

TEST(DampingJson, RoundTripsEveryForm) {
  DampingOpt poly;
  poly.form = PolyDamping{WPoly::monomial(2, 0, 3.0)};
  poly.z = cd(0.5, 0.0);
  DampingOpt prod;
  prod.form = ProductDamping{1, {cd(1.0, 0.0), cd(-0.5, 0.25)}, 1.5};
  prod.z = cd(-0.25, 1.0);
  prod.floor_eps = 0.125;
  DampingOpt mod;
  mod.form = ModifiedDamping{0.3, {cd(0.0, 1.0)}, 2.0};
  mod.z = cd(-1.0, 0.0);
  mod.floor_eps = 0.0;

  for (const DampingOpt& d : {poly, prod, mod}) {
    const DampingOpt back = damping_from_json(damping_to_json(d), "t");
    EXPECT_EQ(back.form.index(), d.form.index());
    EXPECT_EQ(back.z, d.z);
    EXPECT_DOUBLE_EQ(back.floor_eps, d.floor_eps);
  }
  const auto back = std::get<ProductDamping>(damping_from_json(damping_to_json(prod), "t").form);
  EXPECT_EQ(back.m, 1);
  ASSERT_EQ(back.roots.size(), 2u);
  EXPECT_EQ(back.roots[1], cd(-0.5, 0.25));
  EXPECT_DOUBLE_EQ(back.eta, 1.5);
}

TEST(DampingJson, FloorAndMultiplicityForms) {
  auto parse = [](const char* text) { return damping_from_json(parse_json_text(text), "t"); };
  const char* base = R"({"kind": "product", "roots": [{"re": 1, "mult": 3}], "z": [-0.5, 0]%s})";
  char buf[256];
  std::snprintf(buf, sizeof buf, base, "");
  EXPECT_EQ(std::get<ProductDamping>(parse(buf).form).roots.size(), 3u);
  EXPECT_DOUBLE_EQ(parse(buf).floor_eps, -1.0);  // automatic floor by default
  std::snprintf(buf, sizeof buf, base, R"(, "floor": "auto")");
  EXPECT_DOUBLE_EQ(parse(buf).floor_eps, -1.0);
  std::snprintf(buf, sizeof buf, base, R"(, "floor": "none")");
  EXPECT_DOUBLE_EQ(parse(buf).floor_eps, 0.0);
  std::snprintf(buf, sizeof buf, base, R"(, "floor": 0.25)");
  EXPECT_DOUBLE_EQ(parse(buf).floor_eps, 0.25);
  std::snprintf(buf, sizeof buf, base, R"(, "eta": "3/2")");
  EXPECT_DOUBLE_EQ(std::get<ProductDamping>(parse(buf).form).eta, 1.5);
}

TEST(DampingJson, RejectsMalformedForms) {
  auto parse = [](const char* text) { return damping_from_json(parse_json_text(text), "t"); };
  EXPECT_RAISES(parse(R"({"kind": "exotic", "z": 0})"), errc::unsupported_kind);
  EXPECT_RAISES(parse(R"({"kind": "product", "roots": [{"re": 1}]})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "product", "roots": [{"re": 1, "mult": 0}], "z": 0})"),
                errc::parse_error);
  EXPECT_RAISES(parse(R"({"kind": "modified", "roots": [{"re": 1}], "z": 0})"),
                errc::parse_error);  // modified needs 'additive'
  EXPECT_RAISES(parse(R"({"kind": "polynomial", "d": {"terms": [{"k":1,"l":0,"a":1}]}, "z": 0, "q": 1})"),
                errc::parse_error);
}

// --------------------------------------------------------- caps and lambdas

TEST(CapsJson, BoundsAreEnforced) {
  const GridCaps caps =
      caps_from_json(parse_json_text(R"({"floor": 32, "cap": 512, "samples_per_period": 4})"), "t");
  EXPECT_EQ(caps.m_floor, 32);
  EXPECT_EQ(caps.m_cap, 512);
  EXPECT_EQ(caps.samples_per_period, 4);
  auto parse = [](const char* text) { return caps_from_json(parse_json_text(text), "t"); };
  EXPECT_RAISES(parse(R"({"floor": 8})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"floor": 64, "cap": 32})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"samples_per_period": 1})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"m_floor": 64})"), errc::parse_error);
}

TEST(LambdasJson, ParsesAndRejects) {
  const LambdaGrid g = lambdas_from_json(parse_json_text(R"({"min": 8, "max": 64, "count": 5})"), "t");
  EXPECT_DOUBLE_EQ(g.min, 8.0);
  EXPECT_DOUBLE_EQ(g.max, 64.0);
  EXPECT_EQ(g.count, 5);
  EXPECT_RAISES(lambdas_from_json(parse_json_text(R"({"start": 8})"), "t"), errc::parse_error);
}

// --------------------------------------------------------------- run configs

TEST(RunConfigs, NormDefaultsAndOverrides) {
  const NormRunConfig minimal = norm_config_from_json(parse_json_text(
      R"({"phase": {"terms": [{"k":1,"l":1,"a":1}]}, "cutoff": {"kind": "tensor_bump"}})"));
  EXPECT_DOUBLE_EQ(minimal.lambda, 256.0);
  EXPECT_EQ(minimal.p, Rat(2));
  EXPECT_EQ(minimal.quadrant, 0);
  EXPECT_EQ(minimal.restarts, 8);
  EXPECT_FALSE(minimal.grid_override.has_value());
  EXPECT_FALSE(minimal.damping.has_value());

  const NormRunConfig grid = norm_config_from_json(parse_json_text(
      R"({"phase": {"terms": [{"k":1,"l":1,"a":1}]}, "cutoff": {"kind": "tensor_bump"},
          "grid": {"mx": 64, "my": 48}, "p": "3/2", "lambda": 32, "seed": 7})"));
  ASSERT_TRUE(grid.grid_override.has_value());
  EXPECT_EQ(grid.grid_override->first, 64);
  EXPECT_EQ(grid.grid_override->second, 48);
  EXPECT_EQ(grid.p, Rat(3, 2));
  EXPECT_EQ(grid.seed, 7u);

  auto parse = [](const char* text) { return norm_config_from_json(parse_json_text(text)); };
  EXPECT_RAISES(parse(R"({"cutoff": {"kind": "tensor_bump"}})"), errc::parse_error);
  EXPECT_RAISES(parse(R"({"phase": {"terms": [{"k":1,"l":1,"a":1}]},
                          "cutoff": {"kind": "tensor_bump"}, "grid": {"mx": 8, "my": 32}})"),
                errc::parse_error);
  EXPECT_RAISES(parse(R"({"phase": {"terms": [{"k":1,"l":1,"a":1}]},
                          "cutoff": {"kind": "tensor_bump"}, "phase2": 1})"),
                errc::parse_error);
}

TEST(RunConfigs, SweepParsesAllFields) {
  const SweepConfigParse parsed = sweep_config_from_json(parse_json_text(R"({
    "phase": {"terms": [{"k":2,"l":1,"a":"1/2"}]},
    "cutoff": {"kind": "indicator_box", "x": [0.5, 1.5], "y": [0.5, 1.5]},
    "p": "3/2",
    "lambdas": {"min": 16, "max": 512, "count": 6},
    "quadrant": 1,
    "caps": {"floor": 64, "cap": 1024},
    "seed": 11,
    "restarts": 3,
    "tolerance": 0.1,
    "expected_decay": "1/3",
    "allow_under_resolved": true
  })"));
  const SweepConfig& c = parsed.config;
  EXPECT_EQ(c.p, Rat(3, 2));
  EXPECT_DOUBLE_EQ(c.lambdas.min, 16.0);
  EXPECT_EQ(c.lambdas.count, 6);
  EXPECT_EQ(c.quadrant, 1);
  EXPECT_EQ(c.caps.m_floor, 64);
  EXPECT_EQ(c.seed, 11u);
  EXPECT_EQ(c.restarts, 3);
  EXPECT_DOUBLE_EQ(c.tolerance, 0.1);
  ASSERT_TRUE(c.expected_decay.has_value());
  EXPECT_EQ(*c.expected_decay, Rat(1, 3));
  EXPECT_TRUE(c.allow_under_resolved);
  ASSERT_TRUE(c.phase);
  EXPECT_TRUE(parsed.phase_poly.find(2, 1) != nullptr);
}

TEST(RunConfigs, ExperimentConfigsParse) {
  const UniformityConfig u = uniformity_config_from_json(parse_json_text(R"({
    "family": [{"k": 2, "l": 1, "range": [-2, 2]}, {"k": 1, "l": 2}],
    "designated": 1, "draws": 9, "lambda": 64, "p": 2,
    "cutoff": {"kind": "tensor_bump"}, "forced_abs": [0.001, 0.5]
  })"));
  ASSERT_EQ(u.family.size(), 2u);
  EXPECT_DOUBLE_EQ(u.family[0].lo, -2.0);
  EXPECT_DOUBLE_EQ(u.family[1].lo, -1.0);  // default draw range
  EXPECT_EQ(u.designated, 1);
  EXPECT_EQ(u.draws, 9);
  ASSERT_EQ(u.forced_abs.size(), 2u);
  EXPECT_DOUBLE_EQ(u.forced_abs[1], 0.5);
  EXPECT_RAISES(uniformity_config_from_json(
                    parse_json_text(R"({"family": [{"k":1,"l":1}]})")),
                errc::parse_error);  // cutoff is mandatory

  const CounterexampleConfig ce = counterexample_config_from_json(parse_json_text(
      R"({"a": 1, "b": 0.5, "N": 2, "eps0": 0.2, "K": [16, 64], "allow_out_of_regime": true})"));
  EXPECT_EQ(ce.N, 2);
  EXPECT_DOUBLE_EQ(ce.eps0, 0.2);
  ASSERT_EQ(ce.K.size(), 2u);
  EXPECT_TRUE(ce.allow_out_of_regime);
  EXPECT_RAISES(counterexample_config_from_json(parse_json_text(R"({"a": 1})")),
                errc::parse_error);  // K is mandatory

  const AtomImageConfig at = atoms_config_from_json(parse_json_text(R"({
    "phase": {"terms": [{"k":2,"l":1,"a":"1/2"}, {"k":1,"l":2,"a":"-1/2"}]},
    "j": 1, "k": -1, "s": 1, "lambda": 32, "relative_sizes": [0.25, 0.125],
    "flat_control": true, "N0": 3, "root_index": 1
  })"));
  EXPECT_EQ(at.j, 1);
  EXPECT_EQ(at.k, -1);
  ASSERT_EQ(at.relative_sizes.size(), 2u);
  EXPECT_TRUE(at.flat_control);
  EXPECT_EQ(at.N0, 3);
  EXPECT_RAISES(atoms_config_from_json(parse_json_text(
                    R"({"phase": {"terms": [{"k":1,"l":1,"a":1}]}, "relative_sizes": 0.25})")),
                errc::parse_error);
}

TEST(JsonPlumbing, CanonicalDumpSortsKeys) {
  EXPECT_EQ(canonical_dump(parse_json_text(R"({"b": 1, "a": [2, 3]})")), R"({"a":[2,3],"b":1})");
  EXPECT_RAISES(parse_json_text("{nope"), errc::parse_error);
  EXPECT_RAISES(load_json_file("/nonexistent/oscillab.json"), errc::io_error);
}

// ------------------------------------------------------------------ CLI runs

struct CliResult {
  int code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(OSCILLAB_CLI_PATH) + " " + args + " 2>&1";
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  CliResult res;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) res.output += buf;
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("oscillab_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }
  fs::path out(const std::string& name) { return dir_ / name; }
  static json read_json(const fs::path& p) { return parse_json_text(read_text_file(p.string())); }

  fs::path dir_;
};

// wall-clock fields are the only nondeterministic output; strip them before
// comparing runs
json masked(json j) {
  if (j.is_object()) {
    j.erase("wall_ms");
    for (auto& [key, value] : j.items()) value = masked(value);
  } else if (j.is_array()) {
    for (auto& value : j) value = masked(value);
  }
  return j;
}

std::string csv_without_last_column(const std::string& csv) {
  std::istringstream in(csv);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) != 0) {
      const size_t comma = line.rfind(',');
      if (comma != std::string::npos) line.erase(comma);
    }
    out += line + "\n";
  }
  return out;
}

constexpr const char* kSweepConfig = R"({
  "phase": {"terms": [{"k": 1, "l": 1, "a": 1}]},
  "cutoff": {"kind": "tensor_bump"},
  "p": 2,
  "lambdas": {"min": 16, "max": 64, "count": 4},
  "caps": {"floor": 32, "cap": 256},
  "seed": 3
})";

TEST_F(CliTest, SelftestPasses) {
  const CliResult r = run_cli("selftest");
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("ok "), std::string::npos);
  EXPECT_EQ(r.output.find("FAIL"), std::string::npos) << r.output;
}

TEST_F(CliTest, AnalyzeReportsWeightsAndPredictions) {
  const fs::path cfg = write_config("a.json", R"({
    "phase": {"terms": [{"k": 3, "l": 1, "a": 1}, {"k": 1, "l": 3, "a": -1}]}
  })");
  const CliResult r =
      run_cli("analyze --config " + cfg.string() + " --out " + out("o").string());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("weights: (p, q) = (1, 1), D = 4"), std::string::npos) << r.output;
  const json rep = read_json(out("o") / "analyze.json");
  EXPECT_EQ(rep.at("weights").at("D").get<int>(), 4);
  ASSERT_EQ(rep.at("sharp").size(), 2u);
  EXPECT_EQ(rep.at("sharp")[0].at("decay").get<std::string>(), "1/4");
  EXPECT_FALSE(rep.at("hessian").at("zero").get<bool>());
  // Hessian 3x^2 - 3y^2 factors through the two real sheets x = +-y
  EXPECT_EQ(rep.at("hessian").at("factorization").at("roots").size(), 2u);
  EXPECT_EQ(rep.at("damped").size(), 3u);
  EXPECT_EQ(rep.at("meta").at("config_hash").get<std::string>().size(), 16u);
}

TEST_F(CliTest, AnalyzeRejectsInconsistentWeights) {
  const fs::path cfg = write_config("a.json", R"({
    "phase": {"terms": [{"k": 1, "l": 1, "a": 1}, {"k": 2, "l": 2, "a": 1}]}
  })");
  const CliResult r = run_cli("analyze --config " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("error"), std::string::npos);
}

TEST_F(CliTest, ExitCodesSeparateFailureKinds) {
  const fs::path bad = write_config("bad.json", "{nope");
  EXPECT_EQ(run_cli("analyze --config " + bad.string()).code, 1);
  EXPECT_EQ(run_cli("analyze --config /nonexistent/cfg.json").code, 3);
  EXPECT_EQ(run_cli("").code, 1);  // a subcommand is required
  EXPECT_EQ(run_cli("norm --config x.json --quadrant 9").code, 1);
  EXPECT_EQ(run_cli("--version").code, 0);
}

TEST_F(CliTest, NormWritesABracketAndHonorsOverrides) {
  const fs::path cfg = write_config("n.json", R"({
    "phase": {"terms": [{"k": 1, "l": 1, "a": 1}]},
    "cutoff": {"kind": "tensor_bump"},
    "lambda": 24,
    "caps": {"floor": 32, "cap": 128},
    "seed": 1
  })");
  const CliResult base =
      run_cli("norm --config " + cfg.string() + " --out " + out("base").string());
  ASSERT_EQ(base.code, 0) << base.output;
  EXPECT_NE(base.output.find("norm bracket:"), std::string::npos);
  const json b = read_json(out("base") / "norm.json");
  EXPECT_GE(b.at("grid").at("mx").get<int>(), 32);
  EXPECT_EQ(b.at("bracket").at("method").get<std::string>(), "dense_spectral");
  EXPECT_LE(b.at("bracket").at("lower").get<double>(), b.at("bracket").at("upper").get<double>());

  const CliResult dual =
      run_cli("norm --config " + cfg.string() + " --out " + out("dual").string() + " --p 3/2");
  ASSERT_EQ(dual.code, 0) << dual.output;
  const json d = read_json(out("dual") / "norm.json");
  EXPECT_EQ(d.at("bracket").at("p").get<std::string>(), "3/2");
  EXPECT_EQ(d.at("config").at("p").get<std::string>(), "3/2");  // override is hashed
  EXPECT_NE(d.at("meta").at("config_hash"), b.at("meta").at("config_hash"));

  const fs::path gcfg = write_config("g.json", R"({
    "phase": {"terms": [{"k": 1, "l": 1, "a": 1}]},
    "cutoff": {"kind": "tensor_bump"},
    "grid": {"mx": 40, "my": 24}
  })");
  const CliResult g = run_cli("norm --config " + gcfg.string() + " --out " + out("g").string());
  ASSERT_EQ(g.code, 0) << g.output;
  const json gj = read_json(out("g") / "norm.json");
  EXPECT_EQ(gj.at("grid").at("mx").get<int>(), 40);
  EXPECT_EQ(gj.at("grid").at("my").get<int>(), 24);
}

TEST_F(CliTest, SweepIsDeterministicUpToWallTime) {
  const fs::path cfg = write_config("s.json", kSweepConfig);
  const CliResult r1 =
      run_cli("sweep --config " + cfg.string() + " --out " + out("r1").string());
  const CliResult r2 =
      run_cli("sweep --config " + cfg.string() + " --out " + out("r2").string());
  ASSERT_EQ(r1.code, 0) << r1.output;
  ASSERT_EQ(r2.code, 0) << r2.output;
  const json j1 = read_json(out("r1") / "sweep.json");
  const json j2 = read_json(out("r2") / "sweep.json");
  EXPECT_EQ(masked(j1), masked(j2));
  EXPECT_EQ(j1.at("verdict").get<std::string>(), "consistent");
  EXPECT_EQ(j1.at("points").size(), 4u);
  const std::string c1 = read_text_file((out("r1") / "sweep.csv").string());
  const std::string c2 = read_text_file((out("r2") / "sweep.csv").string());
  EXPECT_EQ(csv_without_last_column(c1), csv_without_last_column(c2));
  EXPECT_NE(c1.find("lambda,norm_lower,norm_upper"), std::string::npos);
}

TEST_F(CliTest, SweepOverridesAndPlot) {
  const fs::path cfg = write_config("s.json", kSweepConfig);
  const CliResult r = run_cli("sweep --config " + cfg.string() + " --out " + out("o").string() +
                              " --lambda-min 32 --lambda-max 128 --lambda-count 5 --plot");
  ASSERT_EQ(r.code, 0) << r.output;
  const json j = read_json(out("o") / "sweep.json");
  ASSERT_EQ(j.at("points").size(), 5u);
  EXPECT_DOUBLE_EQ(j.at("points")[0].at("lambda").get<double>(), 32.0);
  EXPECT_DOUBLE_EQ(j.at("config").at("lambdas").at("min").get<double>(), 32.0);
  const std::string svg = read_text_file((out("o") / "sweep.svg").string());
  EXPECT_NE(svg.find("<svg"), std::string::npos);
}

TEST_F(CliTest, ProbeCacheLeavesResultsUnchanged) {
  const fs::path cfg = write_config("s.json", kSweepConfig);
  const fs::path cache = out("cache");
  const std::string env = "OSCILLAB_CACHE=" + cache.string() + " ";
  const CliResult plain =
      run_cli("sweep --config " + cfg.string() + " --out " + out("plain").string());
  ASSERT_EQ(plain.code, 0) << plain.output;

  CliResult warm;
  {
    const std::string cmd = env + std::string(OSCILLAB_CLI_PATH) + " sweep --config " +
                            cfg.string() + " --out " + out("warm").string() + " 2>&1";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) warm.output += buf;
    warm.code = WEXITSTATUS(pclose(pipe));
  }
  ASSERT_EQ(warm.code, 0) << warm.output;
  int probe_files = 0;
  for (const auto& e : fs::directory_iterator(cache)) {
    EXPECT_EQ(e.path().filename().string().rfind("probe-", 0), 0u);
    ++probe_files;
  }
  EXPECT_EQ(probe_files, 1);

  CliResult reused;
  {
    const std::string cmd = env + std::string(OSCILLAB_CLI_PATH) + " sweep --config " +
                            cfg.string() + " --out " + out("reused").string() + " 2>&1";
    std::FILE* pipe = popen(cmd.c_str(), "r");
    ASSERT_NE(pipe, nullptr);
    char buf[512];
    while (std::fgets(buf, sizeof buf, pipe)) reused.output += buf;
    reused.code = WEXITSTATUS(pclose(pipe));
  }
  ASSERT_EQ(reused.code, 0) << reused.output;

  const json base = masked(read_json(out("plain") / "sweep.json"));
  EXPECT_EQ(masked(read_json(out("warm") / "sweep.json")), base);
  EXPECT_EQ(masked(read_json(out("reused") / "sweep.json")), base);
}

TEST_F(CliTest, CounterexampleUniformityAndAtomsRun) {
  const fs::path ce = write_config("ce.json", R"({
    "a": 1, "b": 0.5, "N": 1, "eps0": 0.1, "K": [16, 32, 64]
  })");
  const CliResult rc = run_cli("counterexample --config " + ce.string() + " --out " +
                               out("ce").string());
  ASSERT_EQ(rc.code, 0) << rc.output;
  const json cj = read_json(out("ce") / "counterexample.json");
  EXPECT_TRUE(cj.at("fitted").get<bool>());
  EXPECT_NEAR(cj.at("exponent").get<double>(), 0.5, 0.05);

  const fs::path un = write_config("un.json", R"({
    "family": [{"k": 2, "l": 1}],
    "designated": 0, "draws": 2, "lambda": 16,
    "cutoff": {"kind": "tensor_bump"},
    "caps": {"floor": 32, "cap": 128},
    "seed": 5
  })");
  const CliResult ru = run_cli("uniformity --config " + un.string() + " --out " +
                               out("un").string());
  ASSERT_EQ(ru.code, 0) << ru.output;
  const json uj = read_json(out("un") / "uniformity.json");
  ASSERT_EQ(uj.at("draws").size(), 2u);
  EXPECT_GE(uj.at("ratio").get<double>(), 1.0);

  const fs::path at = write_config("at.json", R"({
    "phase": {"terms": [{"k": 2, "l": 1, "a": "1/2"}, {"k": 1, "l": 2, "a": "-1/2"}]},
    "j": 0, "k": 0, "s": 1, "lambda": 8, "relative_sizes": [0.25]
  })");
  const CliResult ra = run_cli("atoms --config " + at.string() + " --out " + out("at").string());
  ASSERT_EQ(ra.code, 0) << ra.output;
  const json aj = read_json(out("at") / "atoms.json");
  EXPECT_TRUE(aj.at("modified_branch").get<bool>());
  ASSERT_EQ(aj.at("norms").size(), 1u);
  EXPECT_GT(aj.at("norms")[0].get<double>(), 0.0);
}

}  // namespace
}  // namespace oscillab
