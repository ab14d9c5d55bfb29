#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "oscillab/experiments.hpp"

namespace oscillab {

using json = nlohmann::json;

// Every parser rejects unknown keys (with the offending key and context named)
// so that typos in configs fail loudly instead of silently using defaults.

json parse_json_text(const std::string& text);  // ParseError with position info
json load_json_file(const std::string& path);

Rat rat_from_json(const json& j, const std::string& ctx);
json rat_to_json(const Rat& r);

WPoly wpoly_from_json(const json& j, const std::string& ctx);
json wpoly_to_json(const WPoly& poly);

CutoffSpec cutoff_from_json(const json& j, const std::string& ctx);
json cutoff_to_json(const CutoffSpec& spec);

DampingOpt damping_from_json(const json& j, const std::string& ctx);
json damping_to_json(const DampingOpt& damping);

GridCaps caps_from_json(const json& j, const std::string& ctx);
LambdaGrid lambdas_from_json(const json& j, const std::string& ctx);

struct AnalyzeConfig {
  WPoly phase;
  int N0 = 2;
};
AnalyzeConfig analyze_config_from_json(const json& j);

struct NormRunConfig {
  WPoly phase;
  double lambda = 256.0;
  Rat p{2};
  CutoffSpec cutoff;
  std::optional<DampingOpt> damping;
  int quadrant = 0;
  GridCaps caps;
  std::optional<std::pair<int, int>> grid_override;  // explicit (mx, my)
  std::uint64_t seed = 0;
  int restarts = 8;
};
NormRunConfig norm_config_from_json(const json& j);

// SweepConfig carries a PhasePtr; the JSON form also returns the raw polynomial
// for echoing into reports.
struct SweepConfigParse {
  SweepConfig config;
  WPoly phase_poly;
};
SweepConfigParse sweep_config_from_json(const json& j);

UniformityConfig uniformity_config_from_json(const json& j);
CounterexampleConfig counterexample_config_from_json(const json& j);
AtomImageConfig atoms_config_from_json(const json& j);

// Canonical dump (sorted keys, no whitespace variance) used for config hashes.
std::string canonical_dump(const json& j);

}  // namespace oscillab
