#pragma once
#include <array>
#include <span>
#include <vector>

#include "patmg/field.hpp"

namespace patmg {

// Computational grid. dims INCLUDE the absorbing boundary layer (pml_thickness
// points on each side of every axis); images live on the interior box.
struct Grid {
  std::array<int, 3> dims{1, 1, 1};
  int rank = 2;
  std::array<double, 3> spacing{0, 0, 0};  // meters
  int pml_thickness = 0;                   // points per side
  double pml_alpha_max = 2.0;              // nepers per grid point at the outer edge
  double dt = 0;                           // seconds
  int nt = 0;                              // time steps
  double c_ref = 0;                        // reference sound speed for the k-space correction

  int interior_dim(int a) const { return dims[a] - 2 * pml_thickness; }
  std::vector<int> interior_dims() const {
    std::vector<int> d(rank);
    for (int a = 0; a < rank; ++a) d[a] = interior_dim(a);
    return d;
  }
  std::size_t num_points() const {
    std::size_t n = 1;
    for (int a = 0; a < rank; ++a) n *= static_cast<std::size_t>(dims[a]);
    return n;
  }
  // physical extent of the interior box along axis a
  double interior_extent(int a) const { return interior_dim(a) * spacing[a]; }
  // highest frequency the grid can propagate for a medium with minimum speed c_min
  double max_supported_frequency(double c_min) const;

  void validate() const;  // throws std::invalid_argument listing every violation
};

// DFT-ordered angular wavenumbers for one axis: k[i] = 2*pi*f_i, f_i the usual
// FFT frequencies (positive Nyquist for even n).
std::vector<double> axis_wavenumbers(int n, double spacing);

struct WavenumberTables {
  std::vector<std::vector<double>> k_axis;  // per-axis DFT-ordered vectors
  Field k_mag;                              // |k| over the full grid (DFT order)
};

WavenumberTables make_wavenumbers(const Grid& g);

// |k|^exponent map; the |k|=0 entry of any negative power is set to 0.
Field k_power(const WavenumberTables& w, double exponent);

// Interior box <-> full grid with boundary layer. `embed` zero-fills the layer.
Field embed_interior(const Field& interior, const Grid& g);
Field extract_interior(const Field& full, const Grid& g);

}  // namespace patmg
