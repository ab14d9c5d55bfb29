#pragma once

#include <string>
#include <vector>

#include "oscillab/experiments.hpp"
#include "oscillab/util.hpp"

namespace oscillab {

// Provenance stamped into every artifact: tool identity, master seed, and the
// hash of the canonical config dump. Reports carry no timestamps so repeated
// runs are bitwise identical.
struct RunMeta {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::uint64_t seed = 0;
  std::string config_hash;  // fnv-1a 64 of the canonical config JSON
};

std::string sweep_csv(const DecayFitResult& result, const RunMeta& meta);
std::string counterexample_csv(const CounterexampleResult& result, const RunMeta& meta);
std::string uniformity_csv(const UniformityReport& report, const RunMeta& meta);
std::string atoms_csv(const AtomImageReport& report, const RunMeta& meta);

// Self-contained log-log SVG chart of the sweep brackets with the predicted
// slope drawn as a guide line.
std::string sweep_svg(const DecayFitResult& result, const std::string& title);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace oscillab
