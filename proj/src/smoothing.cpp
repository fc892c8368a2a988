#include <cmath>
#include <complex>
#include <numbers>

#include "patmg/fft.hpp"
#include "patmg/grid.hpp"
#include "patmg/spectral.hpp"

namespace patmg {

double blackman_axis_gain(int i, int n) {
  int m = (i <= n / 2) ? i : i - n;
  double xi = 2.0 * std::abs(m) / n;
  return 0.42 + 0.5 * std::cos(std::numbers::pi * xi) +
         0.08 * std::cos(2.0 * std::numbers::pi * xi);
}

namespace {

std::vector<double> blackman_multiplier(std::span<const int> dims) {
  auto sd = spectral_dims(dims);
  std::size_t n = 1;
  for (int d : sd) n *= static_cast<std::size_t>(d);
  std::vector<double> mult(n);
  const int rank = static_cast<int>(dims.size());
  for_each_spectral(dims, [&](int i0, int i1, int i2, std::size_t flat) {
    double g = blackman_axis_gain(i0, dims[0]);
    if (rank > 1) g *= blackman_axis_gain(i1, dims[1]);
    if (rank > 2) g *= blackman_axis_gain(i2, dims[2]);
    mult[flat] = g;
  });
  return mult;
}

Field smooth_one(const Field& f) {
  FftWorkspace ws(f.dims());
  auto mult = blackman_multiplier(f.dims());
  Field out = zeros_like(f);
  apply_spectral_multiplier(ws, f, mult, out);
  return out;
}

}  // namespace

Field smooth_source(const Field& image) { return smooth_one(image); }

void smooth_medium(Medium& m) {
  m.c0 = smooth_one(m.c0);
  m.rho0 = smooth_one(m.rho0);
  m.alpha0 = smooth_one(m.alpha0);
  // smoothing can undershoot; absorption must stay physical
  for (double& a : m.alpha0) a = std::max(a, 0.0);
  derive_loss_coefficients(m);
}

Field spectral_derivative(const Field& f, std::span<const double> spacing, int axis) {
  FftWorkspace ws(f.dims());
  std::vector<std::vector<double>> k(f.rank());
  for (int a = 0; a < f.rank(); ++a) k[a] = axis_wavenumbers(f.dim(a), spacing[a]);
  std::vector<std::complex<double>> mult(ws.spectrum_size());
  for_each_spectral(f.dims(), [&](int i0, int i1, int i2, std::size_t flat) {
    int idx[3] = {i0, i1, i2};
    mult[flat] = std::complex<double>(0.0, k[axis][idx[axis]]);
  });
  Field out = zeros_like(f);
  apply_spectral_multiplier(ws, f, mult, out);
  return out;
}

Field fractional_laplacian(const Field& f, std::span<const double> spacing, double s) {
  FftWorkspace ws(f.dims());
  std::vector<std::vector<double>> k(f.rank());
  for (int a = 0; a < f.rank(); ++a) k[a] = axis_wavenumbers(f.dim(a), spacing[a]);
  std::vector<double> mult(ws.spectrum_size());
  for_each_spectral(f.dims(), [&](int i0, int i1, int i2, std::size_t flat) {
    double k2 = k[0][i0] * k[0][i0];
    if (f.rank() > 1) k2 += k[1][i1] * k[1][i1];
    if (f.rank() > 2) k2 += k[2][i2] * k[2][i2];
    mult[flat] = (k2 == 0.0) ? (s == 0.0 ? 1.0 : 0.0) : std::pow(k2, s);
  });
  Field out = zeros_like(f);
  apply_spectral_multiplier(ws, f, mult, out);
  return out;
}

}  // namespace patmg
