#pragma once
#include <array>
#include <random>
#include <vector>

#include "patmg/field.hpp"
#include "patmg/grid.hpp"
#include "patmg/medium.hpp"
#include "patmg/sensors.hpp"

namespace patmg {

// Physical coordinates are cell-centered: interior node i sits at (i+0.5)*dx
// measured from the interior-box corner. (Same convention everywhere: sensors,
// phantoms, resampling, coarse grids.)
inline double node_coord(int i, double dx) { return (i + 0.5) * dx; }

// Initial-pressure phantom primitives (interior coordinates, meters).
struct CapsuleSpec {
  std::array<double, 3> a{0, 0, 0}, b{0, 0, 0};  // segment endpoints
  double radius = 0;
  double amplitude = 1.0;
};
struct BallSpec {
  std::array<double, 3> center{0, 0, 0};
  double radius = 0;
  double amplitude = 1.0;
};

struct PhantomSpec {
  std::vector<CapsuleSpec> vessels;
  std::vector<BallSpec> discs;
  double amplitude_max = 2.0;  // overlaps add, then clip
};

// Nonnegative interior image; overlapping shapes add and clip at amplitude_max.
Field make_phantom(const Grid& g, const PhantomSpec& spec);

// Concentric soft-tissue layout: water outside a circular skin shell, fat inside.
struct TissueLayout {
  std::array<double, 3> center{0, 0, 0};  // interior coordinates
  double skin_outer_radius = 0;
  double skin_thickness = 0;
  double water_c = 1500, water_rho = 1000;
  double skin_c = 1730, skin_rho = 1150;
  double fat_c = 1450, fat_rho = 950;
  double alpha0_tissue = 0.75;  // dB MHz^-y cm^-1
  double alpha0_water = 2e-3;
  double y = 1.5;
};

Medium make_layered_medium(const Grid& g, const TissueLayout& t);

// Modeling-error medium for reconstruction: interface radii shifted inward by
// `interface_shift`, additive per-map noise at snr_db, alpha clamped >= 0,
// then (optionally) smoothed; loss coefficients re-derived.
struct MediumPerturbation {
  double interface_shift = 0.0;  // meters
  double snr_db = 35.0;          // 0 disables the noise
  bool smooth = true;
};

Medium make_perturbed_medium(const Grid& g, const TissueLayout& t, const MediumPerturbation& p,
                             std::mt19937_64& rng);

// Additive white Gaussian noise with power signal_power/10^(snr_db/10).
void add_awgn(std::span<double> x, double snr_db, std::mt19937_64& rng);
void add_awgn(SensorData& d, double snr_db, std::mt19937_64& rng);

// Bilinear resampling between interior images of two grids sharing the same
// physical interior origin (clamped at the edges).
Field resample_image(const Field& src, const Grid& src_grid, const Grid& dst_grid);

}  // namespace patmg
