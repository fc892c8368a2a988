#include "patmg/medium.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace patmg {

void Medium::validate(const Grid& g) const {
  std::ostringstream err;
  std::vector<int> d(g.dims.begin(), g.dims.begin() + g.rank);
  Field ref(d);
  if (!c0.same_shape(ref)) err << "c0 shape does not match the grid; ";
  if (!rho0.same_shape(ref)) err << "rho0 shape does not match the grid; ";
  if (!alpha0.same_shape(ref)) err << "alpha0 shape does not match the grid; ";
  if (err.str().empty()) {
    if (min_value(c0) <= 0) err << "c0 must be positive everywhere; ";
    if (min_value(rho0) <= 0) err << "rho0 must be positive everywhere; ";
    if (min_value(alpha0) < 0) err << "alpha0 must be nonnegative; ";
  }
  if (!(y > 1.0 && y < 3.0)) err << "power-law exponent y must lie in (1,3); ";
  if (y == 2.0) err << "y = 2 makes tan(pi y/2) singular; ";
  std::string s = err.str();
  if (!s.empty()) throw std::invalid_argument("invalid medium: " + s);
}

double alpha0_to_si(double alpha0_db, double y) {
  // dB MHz^-y cm^-1 -> Np (rad/s)^-y m^-1: 100 cm/m, dB -> Np is /(20 log10 e),
  // MHz^-y -> (rad/s)^-y multiplies by (1e-6/(2 pi))^y.
  const double db_to_np = 1.0 / (20.0 * std::log10(std::numbers::e));
  return 100.0 * alpha0_db * db_to_np * std::pow(1e-6 / (2.0 * std::numbers::pi), y);
}

double absorption_np_per_m(double alpha0_db, double y, double w) {
  return alpha0_to_si(alpha0_db, y) * std::pow(w, y);
}

void derive_loss_coefficients(Medium& m) {
  m.tau = zeros_like(m.c0);
  m.eta = zeros_like(m.c0);
  const double t = std::tan(std::numbers::pi * m.y / 2.0);
  for (std::size_t i = 0; i < m.c0.size(); ++i) {
    const double a0 = alpha0_to_si(m.alpha0[i], m.y);
    m.tau[i] = -2.0 * a0 * std::pow(m.c0[i], m.y - 1.0);
    m.eta[i] = 2.0 * a0 * std::pow(m.c0[i], m.y) * t;
  }
}

Medium uniform_medium(const Grid& g, double c0, double rho0, double alpha0_db, double y) {
  Medium m;
  std::vector<int> d(g.dims.begin(), g.dims.begin() + g.rank);
  m.c0 = Field(d);
  m.c0.fill(c0);
  m.rho0 = Field(d);
  m.rho0.fill(rho0);
  m.alpha0 = Field(d);
  m.alpha0.fill(alpha0_db);
  m.y = y;
  derive_loss_coefficients(m);
  return m;
}

}  // namespace patmg
