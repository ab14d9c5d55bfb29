#include "oscillab/rational.hpp"

#include <cstdlib>
#include <stdexcept>

#include "oscillab/errors.hpp"

namespace oscillab {

double to_double(const Rat& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::string rat_string(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Rat parse_rat(const std::string& text) {
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      size_t used = 0;
      long long num = std::stoll(text, &used);
      if (used != text.size()) raise(errc::parse_error, "trailing characters in rational '" + text + "'");
      return Rat(num);
    }
    size_t used = 0;
    long long num = std::stoll(text.substr(0, slash), &used);
    if (used != slash) raise(errc::parse_error, "bad numerator in rational '" + text + "'");
    const std::string den_text = text.substr(slash + 1);
    long long den = std::stoll(den_text, &used);
    if (used != den_text.size()) raise(errc::parse_error, "bad denominator in rational '" + text + "'");
    if (den == 0) raise(errc::parse_error, "zero denominator in rational '" + text + "'");
    return Rat(num, den);
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    raise(errc::parse_error, "cannot parse rational '" + text + "'");
  }
}

}  // namespace oscillab
