#include "oscillab/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "oscillab/report.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

namespace {

void require_keys(const json& j, const std::string& ctx,
                  std::initializer_list<const char*> allowed) {
  if (!j.is_object()) raise(errc::parse_error, ctx + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) raise(errc::parse_error, "unknown key '" + item.key() + "' in " + ctx);
  }
}

double num(const json& j, const std::string& ctx) {
  if (!j.is_number()) raise(errc::parse_error, ctx + " must be a number");
  return j.get<double>();
}

long long integer(const json& j, const std::string& ctx) {
  if (!j.is_number_integer()) raise(errc::parse_error, ctx + " must be an integer");
  return j.get<long long>();
}

bool boolean(const json& j, const std::string& ctx) {
  if (!j.is_boolean()) raise(errc::parse_error, ctx + " must be a boolean");
  return j.get<bool>();
}

std::pair<double, double> range2(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.size() != 2)
    raise(errc::parse_error, ctx + " must be a 2-element array [lo, hi]");
  return {num(j[0], ctx + "[0]"), num(j[1], ctx + "[1]")};
}

cd complex_from(const json& j, const std::string& ctx) {
  if (j.is_number()) return cd(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) return cd(num(j[0], ctx), num(j[1], ctx));
  raise(errc::parse_error, ctx + " must be a number or [re, im]");
}

}  // namespace

json parse_json_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    raise(errc::parse_error, e.what());  // carries byte position
  }
}

json load_json_file(const std::string& path) {
  return parse_json_text(read_text_file(path));
}

Rat rat_from_json(const json& j, const std::string& ctx) {
  if (j.is_number_integer()) return Rat(j.get<long long>());
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v == std::floor(v) && std::abs(v) < 0x1.0p53) return Rat(static_cast<long long>(v));
    raise(errc::parse_error, ctx + ": non-integer numbers lose exactness; write \"num/den\"");
  }
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_array() && j.size() == 2) {
    auto part = [&](const json& e, const char* which) -> long long {
      if (e.is_number_integer()) return e.get<long long>();
      if (e.is_string()) {
        const Rat r = parse_rat(e.get<std::string>());
        if (r.denominator() != 1) raise(errc::parse_error, ctx + ": nested fractions not allowed");
        return r.numerator();
      }
      raise(errc::parse_error, ctx + ": " + which + " must be an integer or string");
    };
    const long long den = part(j[1], "denominator");
    if (den == 0) raise(errc::parse_error, ctx + ": zero denominator");
    return Rat(part(j[0], "numerator"), den);
  }
  raise(errc::parse_error, ctx + " must be an integer, \"num/den\" string, or [num, den]");
}

json rat_to_json(const Rat& r) {
  if (r.denominator() == 1) return json(r.numerator());
  return json::array({std::to_string(r.numerator()), std::to_string(r.denominator())});
}

WPoly wpoly_from_json(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"terms"});
  if (!j.contains("terms") || !j["terms"].is_array() || j["terms"].empty())
    raise(errc::parse_error, ctx + " needs a non-empty 'terms' array");
  WPoly out;
  int idx = 0;
  for (const json& t : j["terms"]) {
    const std::string tctx = ctx + ".terms[" + std::to_string(idx++) + "]";
    require_keys(t, tctx, {"k", "l", "a"});
    if (!t.contains("k") || !t.contains("l") || !t.contains("a"))
      raise(errc::parse_error, tctx + " needs k, l, a");
    const long long k = integer(t["k"], tctx + ".k");
    const long long l = integer(t["l"], tctx + ".l");
    if (k < 0 || l < 0) raise(errc::parse_error, tctx + ": exponents must be non-negative");
    if (out.find(static_cast<int>(k), static_cast<int>(l)))
      raise(errc::parse_error, tctx + ": duplicate exponent pair (" + std::to_string(k) + ", " +
                                   std::to_string(l) + ")");
    const json& a = t["a"];
    if (a.is_number() && !a.is_number_integer()) {
      out.add_term(static_cast<int>(k), static_cast<int>(l), a.get<double>());
    } else {
      out.add_term(static_cast<int>(k), static_cast<int>(l), rat_from_json(a, tctx + ".a"));
    }
  }
  if (out.is_zero()) raise(errc::parse_error, ctx + ": terms cancel to the zero polynomial");
  return out;
}

json wpoly_to_json(const WPoly& poly) {
  json terms = json::array();
  for (const Term& t : poly.terms()) {
    json e{{"k", t.k}, {"l", t.l}};
    e["a"] = t.exact ? rat_to_json(*t.exact) : json(t.a);
    terms.push_back(e);
  }
  return json{{"terms", terms}};
}

CutoffSpec cutoff_from_json(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"kind", "x", "y", "plateau", "j", "k", "lower", "upper"});
  if (!j.contains("kind")) raise(errc::parse_error, ctx + " needs 'kind'");
  const std::string kind = j["kind"].is_string() ? j["kind"].get<std::string>() : "";
  CutoffSpec spec;
  auto read_box = [&](bool need_y) {
    if (j.contains("x")) std::tie(spec.x0, spec.x1) = range2(j["x"], ctx + ".x");
    if (j.contains("y")) std::tie(spec.y0, spec.y1) = range2(j["y"], ctx + ".y");
    if (need_y && !j.contains("y")) raise(errc::parse_error, ctx + " needs 'y'");
  };
  if (kind == "tensor_bump" || kind == "radial_bump" || kind == "indicator_box") {
    spec.kind = kind == "tensor_bump"   ? CutoffKind::tensor_bump
                : kind == "radial_bump" ? CutoffKind::radial_bump
                                        : CutoffKind::indicator_box;
    read_box(false);
    if (j.contains("plateau")) spec.plateau = num(j["plateau"], ctx + ".plateau");
    if (j.contains("j") || j.contains("k") || j.contains("lower") || j.contains("upper"))
      raise(errc::parse_error, ctx + ": keys j/k/lower/upper do not apply to " + kind);
  } else if (kind == "dyadic_cell") {
    spec.kind = CutoffKind::dyadic_cell;
    if (!j.contains("j") || !j.contains("k")) raise(errc::parse_error, ctx + " needs 'j' and 'k'");
    spec.j = static_cast<int>(integer(j["j"], ctx + ".j"));
    spec.k = static_cast<int>(integer(j["k"], ctx + ".k"));
  } else if (kind == "curved_trapezoid") {
    spec.kind = CutoffKind::curved_trapezoid;
    if (!j.contains("x") || !j.contains("lower") || !j.contains("upper"))
      raise(errc::parse_error, ctx + " needs 'x', 'lower', 'upper'");
    std::tie(spec.x0, spec.x1) = range2(j["x"], ctx + ".x");
    auto poly_coeffs = [&](const json& arr, const char* name) {
      if (!arr.is_array() || arr.empty())
        raise(errc::parse_error, ctx + "." + name + " must be a non-empty coefficient array");
      RealPoly p;
      for (const json& c : arr) p.coeff.push_back(num(c, ctx + "." + name));
      return p;
    };
    spec.lower_edge = poly_coeffs(j["lower"], "lower");
    spec.upper_edge = poly_coeffs(j["upper"], "upper");
  } else {
    raise(errc::unsupported_kind, ctx + ": unknown cutoff kind '" + kind + "'");
  }
  return spec;
}

json cutoff_to_json(const CutoffSpec& spec) {
  json j{{"kind", cutoff_kind_name(spec.kind)}};
  switch (spec.kind) {
    case CutoffKind::tensor_bump:
    case CutoffKind::radial_bump:
      j["x"] = {spec.x0, spec.x1};
      j["y"] = {spec.y0, spec.y1};
      j["plateau"] = spec.plateau;
      break;
    case CutoffKind::indicator_box:
      j["x"] = {spec.x0, spec.x1};
      j["y"] = {spec.y0, spec.y1};
      break;
    case CutoffKind::dyadic_cell:
      j["j"] = spec.j;
      j["k"] = spec.k;
      break;
    case CutoffKind::curved_trapezoid:
      j["x"] = {spec.x0, spec.x1};
      j["lower"] = spec.lower_edge.coeff;
      j["upper"] = spec.upper_edge.coeff;
      break;
  }
  return j;
}

DampingOpt damping_from_json(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"kind", "d", "m", "roots", "eta", "additive", "z", "floor"});
  if (!j.contains("kind") || !j["kind"].is_string())
    raise(errc::parse_error, ctx + " needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  DampingOpt out;
  auto read_roots = [&]() {
    std::vector<cd> roots;
    if (!j.contains("roots") || !j["roots"].is_array())
      raise(errc::parse_error, ctx + " needs a 'roots' array");
    int idx = 0;
    for (const json& r : j["roots"]) {
      const std::string rctx = ctx + ".roots[" + std::to_string(idx++) + "]";
      require_keys(r, rctx, {"re", "im", "mult"});
      if (!r.contains("re")) raise(errc::parse_error, rctx + " needs 're'");
      const cd z(num(r["re"], rctx + ".re"),
                 r.contains("im") ? num(r["im"], rctx + ".im") : 0.0);
      const long long mult = r.contains("mult") ? integer(r["mult"], rctx + ".mult") : 1;
      if (mult < 1) raise(errc::parse_error, rctx + ".mult must be >= 1");
      for (long long i = 0; i < mult; ++i) roots.push_back(z);
    }
    return roots;
  };
  auto read_eta = [&]() {
    if (!j.contains("eta")) return 1.0;
    // eta is consumed as a double; accept plain numbers alongside "p/q" strings
    if (j["eta"].is_number()) return j["eta"].get<double>();
    return to_double(rat_from_json(j["eta"], ctx + ".eta"));
  };
  if (kind == "polynomial") {
    if (!j.contains("d")) raise(errc::parse_error, ctx + " needs 'd'");
    out.form = PolyDamping{wpoly_from_json(j["d"], ctx + ".d")};
  } else if (kind == "product") {
    ProductDamping pd;
    pd.m = j.contains("m") ? static_cast<int>(integer(j["m"], ctx + ".m")) : 0;
    pd.roots = read_roots();
    pd.eta = read_eta();
    out.form = pd;
  } else if (kind == "modified") {
    ModifiedDamping md;
    if (!j.contains("additive")) raise(errc::parse_error, ctx + " needs 'additive'");
    md.additive = num(j["additive"], ctx + ".additive");
    md.roots = read_roots();
    md.eta = read_eta();
    out.form = md;
  } else {
    raise(errc::unsupported_kind, ctx + ": unknown damping kind '" + kind + "'");
  }
  if (!j.contains("z")) raise(errc::parse_error, ctx + " needs 'z'");
  out.z = complex_from(j["z"], ctx + ".z");
  if (j.contains("floor")) {
    const json& fl = j["floor"];
    if (fl.is_string() && fl.get<std::string>() == "auto")
      out.floor_eps = -1.0;
    else if (fl.is_string() && fl.get<std::string>() == "none")
      out.floor_eps = 0.0;
    else
      out.floor_eps = num(fl, ctx + ".floor");
  }
  return out;
}

json damping_to_json(const DampingOpt& damping) {
  json j;
  auto roots_json = [](const std::vector<cd>& roots) {
    json arr = json::array();
    for (cd z : roots) arr.push_back(json{{"re", z.real()}, {"im", z.imag()}, {"mult", 1}});
    return arr;
  };
  if (const auto* poly = std::get_if<PolyDamping>(&damping.form)) {
    j["kind"] = "polynomial";
    j["d"] = wpoly_to_json(poly->d);
  } else if (const auto* prod = std::get_if<ProductDamping>(&damping.form)) {
    j["kind"] = "product";
    j["m"] = prod->m;
    j["roots"] = roots_json(prod->roots);
    j["eta"] = prod->eta;
  } else {
    const auto& mod = std::get<ModifiedDamping>(damping.form);
    j["kind"] = "modified";
    j["additive"] = mod.additive;
    j["roots"] = roots_json(mod.roots);
    j["eta"] = mod.eta;
  }
  j["z"] = {damping.z.real(), damping.z.imag()};
  if (damping.floor_eps < 0.0)
    j["floor"] = "auto";
  else if (damping.floor_eps == 0.0)
    j["floor"] = "none";
  else
    j["floor"] = damping.floor_eps;
  return j;
}

GridCaps caps_from_json(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"floor", "cap", "samples_per_period"});
  GridCaps caps;
  if (j.contains("floor")) caps.m_floor = static_cast<int>(integer(j["floor"], ctx + ".floor"));
  if (j.contains("cap")) caps.m_cap = static_cast<int>(integer(j["cap"], ctx + ".cap"));
  if (j.contains("samples_per_period"))
    caps.samples_per_period =
        static_cast<int>(integer(j["samples_per_period"], ctx + ".samples_per_period"));
  if (caps.m_floor < 16) raise(errc::parse_error, ctx + ": floor must be >= 16");
  if (caps.m_cap < caps.m_floor) raise(errc::parse_error, ctx + ": cap must be >= floor");
  if (caps.samples_per_period < 2)
    raise(errc::parse_error, ctx + ": samples_per_period must be >= 2");
  return caps;
}

LambdaGrid lambdas_from_json(const json& j, const std::string& ctx) {
  require_keys(j, ctx, {"min", "max", "count"});
  LambdaGrid grid;
  if (j.contains("min")) grid.min = num(j["min"], ctx + ".min");
  if (j.contains("max")) grid.max = num(j["max"], ctx + ".max");
  if (j.contains("count")) grid.count = static_cast<int>(integer(j["count"], ctx + ".count"));
  return grid;
}

AnalyzeConfig analyze_config_from_json(const json& j) {
  require_keys(j, "config", {"phase", "N0"});
  if (!j.contains("phase")) raise(errc::parse_error, "config needs 'phase'");
  AnalyzeConfig out;
  out.phase = wpoly_from_json(j["phase"], "config.phase");
  if (j.contains("N0")) out.N0 = static_cast<int>(integer(j["N0"], "config.N0"));
  if (out.N0 < 1) raise(errc::parse_error, "config.N0 must be >= 1");
  return out;
}

NormRunConfig norm_config_from_json(const json& j) {
  require_keys(j, "config",
               {"phase", "lambda", "p", "cutoff", "damping", "quadrant", "caps", "grid", "seed",
                "restarts"});
  if (!j.contains("phase") || !j.contains("cutoff"))
    raise(errc::parse_error, "config needs 'phase' and 'cutoff'");
  NormRunConfig out;
  out.phase = wpoly_from_json(j["phase"], "config.phase");
  out.cutoff = cutoff_from_json(j["cutoff"], "config.cutoff");
  if (j.contains("lambda")) out.lambda = num(j["lambda"], "config.lambda");
  if (j.contains("p")) out.p = rat_from_json(j["p"], "config.p");
  if (j.contains("damping")) out.damping = damping_from_json(j["damping"], "config.damping");
  if (j.contains("quadrant"))
    out.quadrant = static_cast<int>(integer(j["quadrant"], "config.quadrant"));
  if (j.contains("caps")) out.caps = caps_from_json(j["caps"], "config.caps");
  if (j.contains("grid")) {
    require_keys(j["grid"], "config.grid", {"mx", "my"});
    if (!j["grid"].contains("mx") || !j["grid"].contains("my"))
      raise(errc::parse_error, "config.grid needs 'mx' and 'my'");
    const int mx = static_cast<int>(integer(j["grid"]["mx"], "config.grid.mx"));
    const int my = static_cast<int>(integer(j["grid"]["my"], "config.grid.my"));
    if (mx < 16 || my < 16) raise(errc::parse_error, "config.grid: explicit grids need mx, my >= 16");
    out.grid_override = {mx, my};
  }
  if (j.contains("seed")) out.seed = static_cast<std::uint64_t>(integer(j["seed"], "config.seed"));
  if (j.contains("restarts"))
    out.restarts = static_cast<int>(integer(j["restarts"], "config.restarts"));
  return out;
}

SweepConfigParse sweep_config_from_json(const json& j) {
  require_keys(j, "config",
               {"phase", "p", "cutoff", "damping", "lambdas", "quadrant", "caps", "seed",
                "restarts", "tolerance", "expected_decay", "allow_under_resolved"});
  if (!j.contains("phase") || !j.contains("cutoff"))
    raise(errc::parse_error, "config needs 'phase' and 'cutoff'");
  SweepConfigParse out;
  out.phase_poly = wpoly_from_json(j["phase"], "config.phase");
  out.config.phase = make_poly_phase(out.phase_poly);
  out.config.cutoff = cutoff_from_json(j["cutoff"], "config.cutoff");
  if (j.contains("p")) out.config.p = rat_from_json(j["p"], "config.p");
  if (j.contains("damping"))
    out.config.damping = damping_from_json(j["damping"], "config.damping");
  if (j.contains("lambdas")) out.config.lambdas = lambdas_from_json(j["lambdas"], "config.lambdas");
  if (j.contains("quadrant"))
    out.config.quadrant = static_cast<int>(integer(j["quadrant"], "config.quadrant"));
  if (j.contains("caps")) out.config.caps = caps_from_json(j["caps"], "config.caps");
  if (j.contains("seed"))
    out.config.seed = static_cast<std::uint64_t>(integer(j["seed"], "config.seed"));
  if (j.contains("restarts"))
    out.config.restarts = static_cast<int>(integer(j["restarts"], "config.restarts"));
  if (j.contains("tolerance")) out.config.tolerance = num(j["tolerance"], "config.tolerance");
  if (j.contains("expected_decay"))
    out.config.expected_decay = rat_from_json(j["expected_decay"], "config.expected_decay");
  if (j.contains("allow_under_resolved"))
    out.config.allow_under_resolved = boolean(j["allow_under_resolved"], "config.allow_under_resolved");
  return out;
}

UniformityConfig uniformity_config_from_json(const json& j) {
  require_keys(j, "config",
               {"family", "designated", "draws", "lambda", "p", "cutoff", "caps", "seed",
                "restarts", "forced_abs"});
  if (!j.contains("family") || !j["family"].is_array() || j["family"].empty())
    raise(errc::parse_error, "config needs a non-empty 'family' array");
  if (!j.contains("cutoff")) raise(errc::parse_error, "config needs 'cutoff'");
  UniformityConfig out;
  int idx = 0;
  for (const json& t : j["family"]) {
    const std::string tctx = "config.family[" + std::to_string(idx++) + "]";
    require_keys(t, tctx, {"k", "l", "range"});
    if (!t.contains("k") || !t.contains("l"))
      raise(errc::parse_error, tctx + " needs 'k' and 'l'");
    UniformityFamilyTerm term;
    term.k = static_cast<int>(integer(t["k"], tctx + ".k"));
    term.l = static_cast<int>(integer(t["l"], tctx + ".l"));
    if (t.contains("range")) std::tie(term.lo, term.hi) = range2(t["range"], tctx + ".range");
    out.family.push_back(term);
  }
  out.cutoff = cutoff_from_json(j["cutoff"], "config.cutoff");
  if (j.contains("designated"))
    out.designated = static_cast<int>(integer(j["designated"], "config.designated"));
  if (j.contains("draws")) out.draws = static_cast<int>(integer(j["draws"], "config.draws"));
  if (j.contains("lambda")) out.lambda = num(j["lambda"], "config.lambda");
  if (j.contains("p")) out.p = rat_from_json(j["p"], "config.p");
  if (j.contains("caps")) out.caps = caps_from_json(j["caps"], "config.caps");
  if (j.contains("seed")) out.seed = static_cast<std::uint64_t>(integer(j["seed"], "config.seed"));
  if (j.contains("restarts"))
    out.restarts = static_cast<int>(integer(j["restarts"], "config.restarts"));
  if (j.contains("forced_abs")) {
    if (!j["forced_abs"].is_array())
      raise(errc::parse_error, "config.forced_abs must be an array");
    for (const json& v : j["forced_abs"])
      out.forced_abs.push_back(num(v, "config.forced_abs"));
  }
  return out;
}

CounterexampleConfig counterexample_config_from_json(const json& j) {
  require_keys(j, "config", {"a", "b", "N", "eps0", "K", "allow_out_of_regime"});
  CounterexampleConfig out;
  if (j.contains("a")) out.a = num(j["a"], "config.a");
  if (j.contains("b")) out.b = num(j["b"], "config.b");
  if (j.contains("N")) out.N = static_cast<int>(integer(j["N"], "config.N"));
  if (j.contains("eps0")) out.eps0 = num(j["eps0"], "config.eps0");
  if (!j.contains("K") || !j["K"].is_array())
    raise(errc::parse_error, "config needs a 'K' array");
  for (const json& v : j["K"]) out.K.push_back(num(v, "config.K"));
  if (j.contains("allow_out_of_regime"))
    out.allow_out_of_regime = boolean(j["allow_out_of_regime"], "config.allow_out_of_regime");
  return out;
}

AtomImageConfig atoms_config_from_json(const json& j) {
  require_keys(j, "config",
               {"phase", "j", "k", "s", "lambda", "relative_sizes", "flat_control", "N0",
                "root_index"});
  if (!j.contains("phase")) raise(errc::parse_error, "config needs 'phase'");
  AtomImageConfig out;
  out.phase = wpoly_from_json(j["phase"], "config.phase");
  if (j.contains("j")) out.j = static_cast<int>(integer(j["j"], "config.j"));
  if (j.contains("k")) out.k = static_cast<int>(integer(j["k"], "config.k"));
  if (j.contains("s")) out.s = static_cast<int>(integer(j["s"], "config.s"));
  if (j.contains("lambda")) out.lambda = num(j["lambda"], "config.lambda");
  if (j.contains("relative_sizes")) {
    if (!j["relative_sizes"].is_array())
      raise(errc::parse_error, "config.relative_sizes must be an array");
    for (const json& v : j["relative_sizes"])
      out.relative_sizes.push_back(num(v, "config.relative_sizes"));
  }
  if (j.contains("flat_control"))
    out.flat_control = boolean(j["flat_control"], "config.flat_control");
  if (j.contains("N0")) out.N0 = static_cast<int>(integer(j["N0"], "config.N0"));
  if (j.contains("root_index"))
    out.root_index = static_cast<int>(integer(j["root_index"], "config.root_index"));
  return out;
}

std::string canonical_dump(const json& j) {
  // nlohmann's object storage is key-sorted, so dump() is already canonical
  return j.dump();
}

}  // namespace oscillab
