#pragma once
// shared fixtures for the unit tests
#include <random>

#include "patmg/field.hpp"
#include "patmg/grid.hpp"
#include "patmg/medium.hpp"
#include "patmg/sensors.hpp"
#include "patmg/wave.hpp"

namespace testsup {
using namespace patmg;

inline Grid small_grid(int n = 32, int pml = 6, int nt = 40, double dx = 2e-4,
                       double dt = 2.0e-8) {
  Grid g;
  g.rank = 2;
  g.dims = {n, n, 1};
  g.spacing = {dx, dx, dx};
  g.pml_thickness = pml;
  g.pml_alpha_max = 2.0;
  g.dt = dt;
  g.nt = nt;
  g.c_ref = 1500.0;
  return g;
}

inline Field random_interior(const Grid& g, std::mt19937_64& rng, bool nonneg = false) {
  Field f(g.interior_dims());
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : f) v = nonneg ? std::abs(dist(rng)) : dist(rng);
  return f;
}

inline Field random_field(std::span<const int> dims, std::mt19937_64& rng) {
  Field f(dims);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : f) v = dist(rng);
  return f;
}

inline SensorData random_data(int ns, int nt, double dt, std::mt19937_64& rng) {
  SensorData d(ns, nt, dt);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (double& v : d.samples) v = dist(rng);
  return d;
}

// ring of detectors well inside the interior box
inline SensorArray ring_sensors(const Grid& g, int count, double radius_frac = 0.35) {
  const double ex = g.interior_extent(0), ey = g.interior_extent(1);
  return make_arc_sensors(count, radius_frac * std::min(ex, ey), {0.5 * ex, 0.5 * ey}, 0.0,
                          360.0 * (count - 1) / count);
}

// centered gaussian blob, peak 1, width sigma (meters)
inline Field gaussian_blob(const Grid& g, double sigma, double cx_frac = 0.5,
                           double cy_frac = 0.5) {
  Field f(g.interior_dims());
  const double cx = cx_frac * g.interior_extent(0);
  const double cy = cy_frac * g.interior_extent(1);
  for (int i = 0; i < g.interior_dim(0); ++i)
    for (int j = 0; j < g.interior_dim(1); ++j) {
      const double x = (i + 0.5) * g.spacing[0] - cx;
      const double y = (j + 0.5) * g.spacing[1] - cy;
      f.at(i, j) = std::exp(-(x * x + y * y) / (2 * sigma * sigma));
    }
  return f;
}

}  // namespace testsup
