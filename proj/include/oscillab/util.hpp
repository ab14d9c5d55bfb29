#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace oscillab {

inline constexpr const char* kToolName = "oscillab";
inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic RNG with a fixed, platform-independent stream. The standard
// <random> engines are portable but the *distributions* are not, so uniform
// and normal draws are derived here directly from the raw 64-bit stream.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // [0, 1), 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller without caching: two uniforms per draw, fully deterministic.
  double normal() {
    double u1 = uniform01();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }
};

// Decorrelates task indices from a master seed so that parallel fan-outs can
// hand every task an independent deterministic stream.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

// x^k for integer k >= 0 by repeated squaring; 0^0 = 1.
double ipow(double x, long long k);

// x^e for real e with the conventions 0^0 = 1 and 0^(e>0) = 0; requires x >= 0.
double pow_real(double x, double e);

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  double elapsed_s() const { return elapsed_ms() / 1000.0; }
};

}  // namespace oscillab
