#pragma once
#include "patmg/field.hpp"
#include "patmg/grid.hpp"
#include "patmg/medium.hpp"
#include "patmg/optim.hpp"
#include "patmg/sensors.hpp"

namespace patmg {

// Cell-centered transfer pair between grids related by a factor-2 refinement.
// prolong_image is separable linear interpolation with clamped (folded) edge
// weights; restrict_image is its scaled transpose, R = (1/2^d) P^T. Rows of P
// sum to 1 and columns to 2^d, so both preserve constants.
Field prolong_image(const Field& coarse);
Field restrict_image(const Field& fine);

// Per-cell minimum of y over the support of the matching prolongation column
// (the fine cells coarse cell i can influence).
Field support_min(const Field& fine);

// Lower bounds for the coarse correction: bounds = R y - support_min(y).
// Any coarse x >= bounds keeps y + P(x - R y) nonnegative.
Field restrict_constraint_bounds(const Field& y);

// Halve the time series: brick-wall low-pass at half the fine Nyquist, then
// take every second sample (odd fine indices line up with coarse times).
SensorData restrict_data(const SensorData& fine);

// Factor-2 coarsening of grid and medium (loss coefficients re-derived).
Grid coarsen_grid(const Grid& fine);
Medium coarsen_medium(const Medium& fine);

struct MgOptions {
  SolveOptions base;       // fine-level algorithm (momentum => mg-fista)
  double kappa = 0.25;     // recurse when ||R g|| > kappa ||g||
  double vartheta = 0.1;   // ... and y moved: ||y - y_tilde|| > vartheta ||y_tilde||
  int q_d = 3;             // max direct steps before recursion is forced eligible
  int q_c = 8;             // coarse iteration cap
  double eps_c = 1e-2;     // coarse relative-decrease stop
  double rho_tv = 1e-2;    // TV smoothing parameter on both levels
  double coarse_step_scale = 1.0;
};

struct MgStats {
  int recursions = 0;
  std::vector<int> coarse_iters;          // per recursion
  std::vector<double> gate_ratios;        // ||R g_rho|| / ||g_rho|| per tested iteration
  double max_coherence_mismatch = 0;      // ||(grad_c + v) - R grad_f||_inf, ~0
  double min_iterate = 0;                 // smallest entry seen across accepted iterates
};

// Two-level solver: proximal-gradient steps on the fine problem, with
// first-order-coherent smoothed coarse corrections when the restricted
// gradient stays large. `fine`/`coarse` carry operator, data and Lipschitz
// constant per level.
SolveResult mg_solve(const SolveContext& fine, const SolveContext& coarse, const MgOptions& opt,
                     MgStats* stats = nullptr, const Field* x0 = nullptr);

}  // namespace patmg
