#pragma once

#include <boost/rational.hpp>
#include <string>

namespace oscillab {

// Exact rational arithmetic for exponent bookkeeping. long long is plenty:
// every formula in the predictor suite stays far below 2^40 in numerator and
// denominator for any sane input.
using Rat = boost::rational<long long>;

double to_double(const Rat& r);
std::string rat_string(const Rat& r);  // "3/2", "-1/4", "2"
Rat parse_rat(const std::string& text);

}  // namespace oscillab
