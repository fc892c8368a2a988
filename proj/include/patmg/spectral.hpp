#pragma once
#include "patmg/field.hpp"
#include "patmg/medium.hpp"

namespace patmg {

// Separable Blackman window applied in k-space (periodic). Per axis the
// multiplier is 0.42 + 0.5 cos(pi xi) + 0.08 cos(2 pi xi) with xi = |k|/k_nyquist,
// so the DC gain is exactly 1 and the Nyquist gain 0. Self-adjoint by symmetry.
Field smooth_source(const Field& image);

// Window multiplier value for one axis at DFT index i of n (tests, diagnostics).
double blackman_axis_gain(int i, int n);

// Smooth c0/rho0/alpha0 with the same window and re-derive tau/eta.
void smooth_medium(Medium& m);

// Spectral first derivative along `axis` (periodic, no staggering).
Field spectral_derivative(const Field& f, std::span<const double> spacing, int axis);

// (-Laplacian)^s via the |k|^(2s) multiplier; |k|=0 entry is 0 for s > 0.
Field fractional_laplacian(const Field& f, std::span<const double> spacing, double s);

}  // namespace patmg
