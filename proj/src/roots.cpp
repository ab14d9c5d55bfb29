#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "oscillab/errors.hpp"
#include "oscillab/factorization.hpp"

namespace oscillab {

double RealPoly::eval(double t) const {
  double acc = 0.0;
  for (size_t i = coeff.size(); i-- > 0;) acc = acc * t + coeff[i];
  return acc;
}

RealPoly RealPoly::derivative() const {
  RealPoly d;
  for (size_t i = 1; i < coeff.size(); ++i) d.coeff.push_back(coeff[i] * static_cast<double>(i));
  return d;
}

int RealPoly::degree() const {
  for (size_t i = coeff.size(); i-- > 0;)
    if (coeff[i] != 0.0) return static_cast<int>(i);
  return -1;
}

namespace {

cd horner(const std::vector<double>& c, cd z) {
  cd acc = 0.0;
  for (size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

cd horner_deriv(const std::vector<double>& c, cd z) {
  cd acc = 0.0;
  for (size_t i = c.size(); i-- > 1;) acc = acc * z + c[i] * static_cast<double>(i);
  return acc;
}

}  // namespace

std::vector<cd> real_poly_roots(const std::vector<double>& ascending_coeff) {
  // strip trailing (leading-degree) zeros
  std::vector<double> c = ascending_coeff;
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.empty()) raise(errc::invalid_argument, "root finding on the zero polynomial");
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg == 0) return {};

  // monic normalization
  std::vector<double> monic(c.begin(), c.end() - 1);
  for (double& v : monic) v /= c.back();

  // balance by the root-magnitude scale r = |a0|^(1/deg); substituting
  // t = r*tau keeps companion eigenvalues well conditioned for very large or
  // very small roots.
  double r = 1.0;
  if (monic[0] != 0.0) r = std::pow(std::abs(monic[0]), 1.0 / deg);
  r = std::clamp(r, 1e-8, 1e8);
  std::vector<double> bal(deg);
  for (int i = 0; i < deg; ++i) bal[i] = monic[i] * std::pow(r, i - deg);

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -bal[i];
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    raise(errc::root_finding_failed, "companion eigenvalue iteration failed");

  std::vector<cd> roots(deg);
  for (int i = 0; i < deg; ++i) roots[i] = solver.eigenvalues()[i] * r;

  // two guarded Newton corrections against the original coefficients
  for (cd& z : roots) {
    for (int step = 0; step < 2; ++step) {
      const cd pv = horner(c, z);
      const cd dv = horner_deriv(c, z);
      if (std::abs(dv) < 1e-300) break;
      const cd z_next = z - pv / dv;
      if (std::abs(horner(c, z_next)) < std::abs(pv)) z = z_next;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cd a, cd b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return roots;
}

}  // namespace oscillab
