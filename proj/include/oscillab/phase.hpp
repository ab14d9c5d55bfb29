#pragma once

#include <memory>
#include <string>
#include <vector>

#include "oscillab/wpoly.hpp"

namespace oscillab {

// Real-valued phase S(x, y) with first partials; the numeric layers only ever
// see this interface.
class Phase {
 public:
  virtual ~Phase() = default;
  virtual double operator()(double x, double y) const = 0;
  virtual double dx(double x, double y) const = 0;
  virtual double dy(double x, double y) const = 0;
  // Stable textual identity used for cache keys and report provenance.
  virtual std::string describe() const = 0;
};

using PhasePtr = std::shared_ptr<const Phase>;

class PolyPhase final : public Phase {
 public:
  explicit PolyPhase(WPoly poly) : poly_(std::move(poly)) {}
  const WPoly& poly() const { return poly_; }
  double operator()(double x, double y) const override { return poly_.eval(x, y); }
  double dx(double x, double y) const override { return poly_.eval_dx(x, y); }
  double dy(double x, double y) const override { return poly_.eval_dy(x, y); }
  std::string describe() const override;

 private:
  WPoly poly_;
};

// Sum of c * x^ex * y^ey with real exponents; defined on x, y >= 0 (negative
// arguments use |x|, |y|, which is the only regime the radial reduction needs).
struct GenTerm {
  double c = 0.0;
  double ex = 0.0;
  double ey = 0.0;
};

class GeneralizedPhase final : public Phase {
 public:
  explicit GeneralizedPhase(std::vector<GenTerm> terms) : terms_(std::move(terms)) {}
  const std::vector<GenTerm>& terms() const { return terms_; }
  double operator()(double x, double y) const override;
  double dx(double x, double y) const override;
  double dy(double x, double y) const override;
  std::string describe() const override;

 private:
  std::vector<GenTerm> terms_;
};

PhasePtr make_poly_phase(const WPoly& poly);

}  // namespace oscillab
