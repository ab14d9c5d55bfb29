#include "oscillab/util.hpp"

#include <cstdio>
#include <cstdlib>

#include "oscillab/errors.hpp"

namespace oscillab {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  SplitMix64 g(master ^ (0x632be59bd9b4e019ULL * (stream + 1)));
  g.next();
  return g.next();
}

double ipow(double x, long long k) {
  if (k < 0) raise(errc::invalid_argument, "ipow: negative exponent");
  double acc = 1.0;
  double base = x;
  while (k > 0) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return acc;
}

double pow_real(double x, double e) {
  if (x < 0.0) raise(errc::invalid_argument, "pow_real: negative base");
  if (x == 0.0) {
    if (e == 0.0) return 1.0;
    if (e > 0.0) return 0.0;
    raise(errc::division_by_zero, "pow_real: 0 raised to a negative power");
  }
  return std::pow(x, e);
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_double(double v) {
  char buf[64];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace oscillab
