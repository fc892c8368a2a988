#include "patmg/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace patmg {

double Grid::max_supported_frequency(double c_min) const {
  double f = std::numeric_limits<double>::infinity();
  for (int a = 0; a < rank; ++a) f = std::min(f, c_min / (2.0 * spacing[a]));
  return f;
}

void Grid::validate() const {
  std::ostringstream err;
  if (rank != 2 && rank != 3) err << "rank must be 2 or 3; ";
  for (int a = 0; a < rank; ++a) {
    if (dims[a] < 2) err << "dims[" << a << "] must be >= 2; ";
    if (spacing[a] <= 0) err << "spacing[" << a << "] must be positive; ";
  }
  if (pml_thickness < 0) err << "pml_thickness must be >= 0; ";
  for (int a = 0; a < rank; ++a)
    if (dims[a] - 2 * pml_thickness < 1)
      err << "dims[" << a << "] leaves no interior after the boundary layer; ";
  if (pml_alpha_max < 0) err << "pml_alpha_max must be >= 0; ";
  if (dt <= 0) err << "dt must be positive; ";
  if (nt < 1) err << "nt must be >= 1; ";
  if (c_ref <= 0) err << "c_ref must be positive; ";
  std::string s = err.str();
  if (!s.empty()) throw std::invalid_argument("invalid grid: " + s);
}

std::vector<double> axis_wavenumbers(int n, double spacing) {
  std::vector<double> k(n);
  const double step = 2.0 * std::numbers::pi / (n * spacing);
  for (int i = 0; i < n; ++i) {
    int m = (i <= n / 2) ? i : i - n;
    k[i] = step * m;
  }
  return k;
}

WavenumberTables make_wavenumbers(const Grid& g) {
  WavenumberTables w;
  w.k_axis.resize(g.rank);
  for (int a = 0; a < g.rank; ++a) w.k_axis[a] = axis_wavenumbers(g.dims[a], g.spacing[a]);
  std::vector<int> d(g.dims.begin(), g.dims.begin() + g.rank);
  w.k_mag = Field(d);
  const int nx = g.dims[0], ny = g.rank > 1 ? g.dims[1] : 1, nz = g.rank > 2 ? g.dims[2] : 1;
  std::size_t idx = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++idx) {
        double s = w.k_axis[0][ix] * w.k_axis[0][ix];
        if (g.rank > 1) s += w.k_axis[1][iy] * w.k_axis[1][iy];
        if (g.rank > 2) s += w.k_axis[2][iz] * w.k_axis[2][iz];
        w.k_mag[idx] = std::sqrt(s);
      }
  return w;
}

Field k_power(const WavenumberTables& w, double exponent) {
  Field out = zeros_like(w.k_mag);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (w.k_mag[i] == 0.0)
      out[i] = (exponent < 0) ? 0.0 : (exponent == 0.0 ? 1.0 : 0.0);
    else
      out[i] = std::pow(w.k_mag[i], exponent);
  }
  return out;
}

Field embed_interior(const Field& interior, const Grid& g) {
  std::vector<int> full(g.dims.begin(), g.dims.begin() + g.rank);
  Field out(full);
  const int p = g.pml_thickness;
  for (int a = 0; a < g.rank; ++a)
    if (interior.dim(a) != g.interior_dim(a))
      throw std::invalid_argument("embed_interior: image does not match the interior box");
  const int nx = interior.dim(0), ny = g.rank > 1 ? interior.dim(1) : 1,
            nz = g.rank > 2 ? interior.dim(2) : 1;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz) {
        std::size_t src = (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
        std::size_t dst =
            (static_cast<std::size_t>(ix + p) * g.dims[1] + (g.rank > 1 ? iy + p : 0)) *
                (g.rank > 2 ? g.dims[2] : 1) +
            (g.rank > 2 ? iz + p : 0);
        out[dst] = interior[src];
      }
  return out;
}

Field extract_interior(const Field& full, const Grid& g) {
  Field out(g.interior_dims());
  const int p = g.pml_thickness;
  const int nx = out.dim(0), ny = g.rank > 1 ? out.dim(1) : 1, nz = g.rank > 2 ? out.dim(2) : 1;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz) {
        std::size_t dst = (static_cast<std::size_t>(ix) * ny + iy) * nz + iz;
        std::size_t src =
            (static_cast<std::size_t>(ix + p) * g.dims[1] + (g.rank > 1 ? iy + p : 0)) *
                (g.rank > 2 ? g.dims[2] : 1) +
            (g.rank > 2 ? iz + p : 0);
        out[dst] = full[src];
      }
  return out;
}

}  // namespace patmg
