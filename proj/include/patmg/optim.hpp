#pragma once
#include <functional>
#include <optional>
#include <string>

#include "patmg/field.hpp"
#include "patmg/io.hpp"
#include "patmg/wave.hpp"

namespace patmg {

// ---- total variation -------------------------------------------------------

// Isotropic TV with forward differences and reflexive boundaries (zero
// difference past the last node).
double tv_value(const Field& x);

// Smoothed variant: sum_i sqrt(|grad x|_i^2 + rho^2), differentiable for rho>0.
double tv_smooth_value(const Field& x, double rho);
Field tv_smooth_grad(const Field& x, double rho);

// Forward-difference gradient along one axis and its exact transpose
// (building blocks; exposed for tests).
Field forward_diff(const Field& x, int axis);
Field forward_diff_transpose(const Field& g, int axis);

// prox of w*TV (+ nonnegativity box) about z, solved by the accelerated dual
// projection method; deterministic given the iteration budget.
struct ProxOptions {
  int iters = 20;
  bool nonneg = true;
};
Field prox_tv(const Field& z, double w, const ProxOptions& opt = {});

// ---- data term -------------------------------------------------------------

// gradient of 1/2 ||Hx - d||^2
Field grad_data(const ForwardOperator& H, const Field& x, const SensorData& d);

// ---- Lipschitz constant of the data term -----------------------------------

struct PowerResult {
  double L = 0;  // largest eigenvalue of H^T H
  int iters = 0;
  bool converged = false;
  std::vector<double> rayleigh;  // nondecreasing sequence of estimates
};

PowerResult estimate_lipschitz(const ForwardOperator& H, int max_iters = 15, double tol = 1e-3,
                               std::uint64_t seed = 0x2545f4914f6cdd1dull);

// Same, memoized on disk under cache_dir (keyed by a hash of the operator
// definition). Empty cache_dir disables caching.
PowerResult estimate_lipschitz_cached(const ForwardOperator& H, const std::string& cache_dir,
                                      int max_iters = 15, double tol = 1e-3,
                                      std::uint64_t seed = 0x2545f4914f6cdd1dull,
                                      bool* cache_hit = nullptr);

std::uint64_t operator_hash(const ForwardOperator& H, int max_iters, double tol,
                            std::uint64_t seed);

// ---- proximal-gradient solver (ista / fista) --------------------------------

struct SolveOptions {
  double lambda = 1e-2;
  bool nonneg = true;
  int prox_iters = 20;
  double step_scale = 1.0;  // step = step_scale / L; (0,2] plain, (0,1] with momentum
  bool momentum = false;    // false: ista, true: fista
  int max_iters = 100;
  double eps_d = 1e-3;            // stop when (F_k - F_{k+1})/max(F_k,F_{k+1}) < eps_d
  double divergence_factor = 10;  // abort when F exceeds this multiple of F(x0)
  void validate() const;
};

struct SolveContext {
  const ForwardOperator* H = nullptr;
  const SensorData* data = nullptr;
  double lipschitz = 0;
  // optional ground-truth metric, returns RE in percent
  std::function<double(const Field&)> re_metric;
};

struct SolveResult {
  Field x;
  std::vector<IterationRecord> records;
  std::string stop_reason;  // "tolerance" | "max-iters" | "diverged"
  double f_initial = 0;
  double f_final = 0;
};

SolveResult proximal_gradient_solve(const SolveContext& ctx, SolveOptions opt,
                                    const Field* x0 = nullptr);
SolveResult ista(const SolveContext& ctx, SolveOptions opt, const Field* x0 = nullptr);
SolveResult fista(const SolveContext& ctx, SolveOptions opt, const Field* x0 = nullptr);

// Composite objective F(x) = 1/2||Hx-d||^2 + lambda TV(x), +inf outside the
// nonnegative orthant (beyond a -1e-12 roundoff allowance).
double objective_value(const SolveContext& ctx, const SolveOptions& opt, const Field& x,
                       const SensorData& Hx);

// ---- internals shared with the multigrid driver ----------------------------

namespace pg_detail {

struct State {
  Field x, x_prev, y;
  SensorData Hx, Hx_prev, Hy;
  double t = 1.0;
  double f0 = 0;                 // F at the start point
  double last_f = 0;             // most recent recorded F
  double cpu0 = 0;               // solve start, process CPU seconds
  std::vector<IterationRecord> records;
};

double cpu_seconds();

void init(const SolveContext& ctx, const SolveOptions& opt, const Field* x0, State& st);
// one proximal-gradient step from (y, Hy) using `grad`; appends a record
void direct_update(const SolveContext& ctx, const SolveOptions& opt, const Field& grad,
                   State& st, const char* kind);
// record metrics for an externally produced iterate (recursive branch)
void accept_iterate(const SolveContext& ctx, const SolveOptions& opt, Field x_new, State& st,
                    const char* kind);
// returns "", "tolerance", or "diverged"
std::string stop_reason(const SolveOptions& opt, const State& st);
// momentum/extrapolation update after an accepted iterate
void momentum_update(const SolveOptions& opt, State& st);

}  // namespace pg_detail

}  // namespace patmg
