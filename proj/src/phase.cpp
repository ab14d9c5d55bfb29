#include "oscillab/phase.hpp"

#include <cmath>
#include <sstream>

#include "oscillab/util.hpp"

namespace oscillab {

std::string PolyPhase::describe() const {
  std::ostringstream os;
  os << "poly:";
  for (const Term& t : poly_.terms())
    os << t.k << "," << t.l << "," << format_double(t.a) << ";";
  return os.str();
}

double GeneralizedPhase::operator()(double x, double y) const {
  const double ax = std::abs(x), ay = std::abs(y);
  double s = 0.0;
  for (const GenTerm& t : terms_) s += t.c * pow_real(ax, t.ex) * pow_real(ay, t.ey);
  return s;
}

double GeneralizedPhase::dx(double x, double y) const {
  const double ax = std::abs(x), ay = std::abs(y);
  double s = 0.0;
  for (const GenTerm& t : terms_) {
    if (t.ex == 0.0) continue;
    if (ax == 0.0 && t.ex < 1.0) continue;  // derivative blows up; grid probes skip the origin
    s += t.c * t.ex * pow_real(ax, t.ex - 1.0) * pow_real(ay, t.ey);
  }
  return s;
}

double GeneralizedPhase::dy(double x, double y) const {
  const double ax = std::abs(x), ay = std::abs(y);
  double s = 0.0;
  for (const GenTerm& t : terms_) {
    if (t.ey == 0.0) continue;
    if (ay == 0.0 && t.ey < 1.0) continue;
    s += t.c * t.ey * pow_real(ax, t.ex) * pow_real(ay, t.ey - 1.0);
  }
  return s;
}

std::string GeneralizedPhase::describe() const {
  std::ostringstream os;
  os << "gen:";
  for (const GenTerm& t : terms_)
    os << format_double(t.c) << "," << format_double(t.ex) << "," << format_double(t.ey) << ";";
  return os.str();
}

PhasePtr make_poly_phase(const WPoly& poly) { return std::make_shared<PolyPhase>(poly); }

}  // namespace oscillab
