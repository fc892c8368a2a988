#pragma once
#include "patmg/field.hpp"
#include "patmg/grid.hpp"

namespace patmg {

// Acoustic medium maps on the full grid (boundary layer included).
// alpha0 is the power-law absorption prefactor in dB MHz^-y cm^-1; tau/eta are
// the derived dispersive-loss coefficient maps (zero when lossless).
struct Medium {
  Field c0;      // sound speed, m/s
  Field rho0;    // ambient density, kg/m^3
  Field alpha0;  // absorption prefactor, dB MHz^-y cm^-1
  double y = 1.5;
  Field tau, eta;

  bool lossless() const {
    for (double a : alpha0)
      if (a != 0.0) return false;
    return true;
  }
  double c_max() const { return max_value(c0); }
  void validate(const Grid& g) const;
};

// dB MHz^-y cm^-1  ->  Np (rad/s)^-y m^-1
double alpha0_to_si(double alpha0_db, double y);

// Absorption in Np/m at angular frequency w for a power-law medium.
double absorption_np_per_m(double alpha0_db, double y, double w);

// Populate tau = -2 a0 c0^(y-1) and eta = 2 a0 c0^y tan(pi y / 2), a0 in SI.
void derive_loss_coefficients(Medium& m);

// Uniform medium helper (tests, examples).
Medium uniform_medium(const Grid& g, double c0, double rho0, double alpha0_db, double y);

}  // namespace patmg
