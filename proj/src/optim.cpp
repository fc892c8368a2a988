#include "patmg/optim.hpp"

#include <time.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

namespace patmg {

// ---- total variation -------------------------------------------------------

Field forward_diff(const Field& x, int axis) {
  Field g = zeros_like(x);
  const int nx = x.dim(0), ny = x.rank() > 1 ? x.dim(1) : 1, nz = x.rank() > 2 ? x.dim(2) : 1;
  const int n[3] = {nx, ny, nz};
  std::size_t stride = 1;
  for (int a = axis + 1; a < x.rank(); ++a) stride *= static_cast<std::size_t>(x.dim(a));
  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) {
        const int ia = axis == 0 ? ix : (axis == 1 ? iy : iz);
        g[flat] = (ia < n[axis] - 1) ? x[flat + stride] - x[flat] : 0.0;
      }
  return g;
}

Field forward_diff_transpose(const Field& g, int axis) {
  Field x = zeros_like(g);
  const int nx = g.dim(0), ny = g.rank() > 1 ? g.dim(1) : 1, nz = g.rank() > 2 ? g.dim(2) : 1;
  const int n[3] = {nx, ny, nz};
  std::size_t stride = 1;
  for (int a = axis + 1; a < g.rank(); ++a) stride *= static_cast<std::size_t>(g.dim(a));
  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) {
        const int ia = axis == 0 ? ix : (axis == 1 ? iy : iz);
        double v = 0;
        if (ia >= 1 && ia - 1 < n[axis] - 1) v += g[flat - stride];
        if (ia < n[axis] - 1) v -= g[flat];
        x[flat] = v;
      }
  return x;
}

namespace {

// per-cell gradient magnitude accumulation without allocating per-axis fields
template <class F>
void accumulate_tv(const Field& x, F&& take) {
  const int rank = x.rank();
  std::vector<Field> d(rank);
  for (int a = 0; a < rank; ++a) d[a] = forward_diff(x, a);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = 0;
    for (int a = 0; a < rank; ++a) s += d[a][i] * d[a][i];
    take(i, s, d);
  }
}

}  // namespace

double tv_value(const Field& x) {
  double tv = 0;
  accumulate_tv(x, [&](std::size_t, double s, const std::vector<Field>&) { tv += std::sqrt(s); });
  return tv;
}

double tv_smooth_value(const Field& x, double rho) {
  double tv = 0;
  accumulate_tv(
      x, [&](std::size_t, double s, const std::vector<Field>&) { tv += std::sqrt(s + rho * rho); });
  return tv;
}

Field tv_smooth_grad(const Field& x, double rho) {
  const int rank = x.rank();
  std::vector<Field> d(rank);
  for (int a = 0; a < rank; ++a) d[a] = forward_diff(x, a);
  Field denom = zeros_like(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double s = rho * rho;
    for (int a = 0; a < rank; ++a) s += d[a][i] * d[a][i];
    denom[i] = std::sqrt(s);
  }
  Field g = zeros_like(x);
  for (int a = 0; a < rank; ++a) {
    for (std::size_t i = 0; i < x.size(); ++i) d[a][i] /= denom[i];
    Field t = forward_diff_transpose(d[a], a);
    axpy(1.0, t, g);
  }
  return g;
}

// ---- prox ------------------------------------------------------------------

Field prox_tv(const Field& z, double w, const ProxOptions& opt) {
  auto project_c = [&](Field& f) {
    if (opt.nonneg)
      for (double& v : f) v = std::max(v, 0.0);
  };
  if (w == 0.0) {
    Field x = z;
    project_c(x);
    return x;
  }
  if (w < 0) throw std::invalid_argument("prox_tv: negative weight");

  const int rank = z.rank();
  const double step = 1.0 / (4.0 * rank * w);
  std::vector<Field> r(rank), rprev(rank), s(rank);
  for (int a = 0; a < rank; ++a) {
    r[a] = zeros_like(z);
    rprev[a] = zeros_like(z);
    s[a] = zeros_like(z);
  }
  Field x = zeros_like(z);
  double t = 1.0;

  auto primal_from = [&](const std::vector<Field>& dual) {
    x = z;
    for (int a = 0; a < rank; ++a) {
      Field dt_ = forward_diff_transpose(dual[a], a);
      axpy(-w, dt_, x);
    }
    project_c(x);
  };

  for (int it = 0; it < opt.iters; ++it) {
    primal_from(s);
    for (int a = 0; a < rank; ++a) {
      rprev[a] = r[a];
      Field g = forward_diff(x, a);
      r[a] = s[a];
      axpy(step, g, r[a]);
    }
    // per-cell projection onto the unit ball (isotropic coupling)
    for (std::size_t i = 0; i < z.size(); ++i) {
      double nrm2 = 0;
      for (int a = 0; a < rank; ++a) nrm2 += r[a][i] * r[a][i];
      const double f = std::max(1.0, std::sqrt(nrm2));
      for (int a = 0; a < rank; ++a) r[a][i] /= f;
    }
    const double t_new = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
    const double theta = (t - 1.0) / t_new;
    t = t_new;
    for (int a = 0; a < rank; ++a) {
      s[a] = r[a];
      for (std::size_t i = 0; i < z.size(); ++i)
        s[a][i] += theta * (r[a][i] - rprev[a][i]);
    }
  }
  primal_from(r);
  return x;
}

// ---- data term -------------------------------------------------------------

namespace {
SensorData sensor_sub(const SensorData& a, const SensorData& b) {
  SensorData r = a;
  for (std::size_t i = 0; i < r.samples.size(); ++i) r.samples[i] -= b.samples[i];
  return r;
}
}  // namespace

Field grad_data(const ForwardOperator& H, const Field& x, const SensorData& d) {
  SensorData Hx = H.forward(x);
  return H.adjoint(sensor_sub(Hx, d));
}

// ---- power iteration -------------------------------------------------------

PowerResult estimate_lipschitz(const ForwardOperator& H, int max_iters, double tol,
                               std::uint64_t seed) {
  PowerResult res;
  Field x(H.grid().interior_dims());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (double& v : x) v = nd(rng);
  double nx = norm2(x);
  scale(x, 1.0 / nx);

  double prev = 0;
  for (int i = 1; i <= max_iters; ++i) {
    SensorData d = H.forward(x);
    Field z = H.adjoint(d);
    const double r = dot(x, z);
    res.rayleigh.push_back(r);
    res.iters = i;
    res.L = r;
    if (i > 1 && std::abs(r - prev) <= tol * std::abs(r)) {
      res.converged = true;
      break;
    }
    prev = r;
    const double nz = norm2(z);
    if (nz == 0) break;
    scale(z, 1.0 / nz);
    x = std::move(z);
  }
  return res;
}

namespace {
void fnv(std::uint64_t& h, const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}
template <class T>
void fnv_pod(std::uint64_t& h, const T& v) {
  fnv(h, &v, sizeof v);
}
}  // namespace

std::uint64_t operator_hash(const ForwardOperator& H, int max_iters, double tol,
                            std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull;
  const Grid& g = H.grid();
  fnv_pod(h, g.rank);
  for (int a = 0; a < g.rank; ++a) {
    fnv_pod(h, g.dims[a]);
    fnv_pod(h, g.spacing[a]);
  }
  fnv_pod(h, g.pml_thickness);
  fnv_pod(h, g.pml_alpha_max);
  fnv_pod(h, g.dt);
  fnv_pod(h, g.nt);
  fnv_pod(h, g.c_ref);
  const Medium& m = H.medium();
  fnv(h, m.c0.data(), m.c0.size() * sizeof(double));
  fnv(h, m.rho0.data(), m.rho0.size() * sizeof(double));
  fnv(h, m.alpha0.data(), m.alpha0.size() * sizeof(double));
  fnv_pod(h, m.y);
  for (const auto& p : H.sensors().positions) fnv(h, p.data(), sizeof p);
  const bool smooth = H.smoothing(), lossy = H.lossy();
  fnv_pod(h, smooth);
  fnv_pod(h, lossy);
  fnv_pod(h, max_iters);
  fnv_pod(h, tol);
  fnv_pod(h, seed);
  return h;
}

PowerResult estimate_lipschitz_cached(const ForwardOperator& H, const std::string& cache_dir,
                                      int max_iters, double tol, std::uint64_t seed,
                                      bool* cache_hit) {
  if (cache_hit) *cache_hit = false;
  if (cache_dir.empty()) return estimate_lipschitz(H, max_iters, tol, seed);

  std::ostringstream name;
  name << "L-" << std::hex << operator_hash(H, max_iters, tol, seed) << ".json";
  const std::filesystem::path file = std::filesystem::path(cache_dir) / name.str();

  if (std::filesystem::exists(file)) {
    try {
      auto j = read_json(file);
      PowerResult res;
      res.L = j.at("L").get<double>();
      res.iters = j.at("iters").get<int>();
      res.converged = j.at("converged").get<bool>();
      res.rayleigh = j.at("rayleigh").get<std::vector<double>>();
      if (cache_hit) *cache_hit = true;
      return res;
    } catch (const std::exception&) {
      // fall through to recompute on a corrupt cache entry
    }
  }
  PowerResult res = estimate_lipschitz(H, max_iters, tol, seed);
  std::error_code ec;
  std::filesystem::create_directories(cache_dir, ec);
  if (!ec) {
    nlohmann::json j{{"L", res.L},
                     {"iters", res.iters},
                     {"converged", res.converged},
                     {"rayleigh", res.rayleigh}};
    write_json(file, j);
  }
  return res;
}

// ---- solver ----------------------------------------------------------------

void SolveOptions::validate() const {
  std::ostringstream err;
  if (lambda < 0) err << "lambda must be >= 0; ";
  if (prox_iters < 1) err << "prox_iters must be >= 1; ";
  const double hi = momentum ? 1.0 : 2.0;
  if (!(step_scale > 0.0) || step_scale > hi)
    err << "step_scale must lie in (0," << hi << "] for this algorithm; ";
  if (max_iters < 0) err << "max_iters must be >= 0; ";
  if (eps_d < 0) err << "eps_d must be >= 0; ";
  if (divergence_factor <= 1) err << "divergence_factor must exceed 1; ";
  std::string s = err.str();
  if (!s.empty()) throw std::invalid_argument("invalid solver options: " + s);
}

double objective_value(const SolveContext& ctx, const SolveOptions& opt, const Field& x,
                       const SensorData& Hx) {
  if (opt.nonneg && min_value(x) < -1e-12) return std::numeric_limits<double>::infinity();
  double res2 = 0;
  for (std::size_t i = 0; i < Hx.samples.size(); ++i) {
    const double r = Hx.samples[i] - ctx.data->samples[i];
    res2 += r * r;
  }
  return 0.5 * res2 + opt.lambda * tv_value(x);
}

namespace pg_detail {

double cpu_seconds() {
  timespec ts;
  clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &ts);
  return static_cast<double>(ts.tv_sec) + 1e-9 * static_cast<double>(ts.tv_nsec);
}

void init(const SolveContext& ctx, const SolveOptions& opt, const Field* x0, State& st) {
  st.cpu0 = cpu_seconds();
  st.x = x0 ? *x0 : Field(ctx.H->grid().interior_dims());
  st.Hx = ctx.H->forward(st.x);
  st.f0 = objective_value(ctx, opt, st.x, st.Hx);
  st.last_f = st.f0;
  st.x_prev = st.x;
  st.Hx_prev = st.Hx;
  st.y = st.x;
  st.Hy = st.Hx;
  st.t = 1.0;
}

void accept_iterate(const SolveContext& ctx, const SolveOptions& opt, Field x_new, State& st,
                    const char* kind) {
  SensorData Hx_new = ctx.H->forward(x_new);
  double res2 = 0;
  for (std::size_t i = 0; i < Hx_new.samples.size(); ++i) {
    const double r = Hx_new.samples[i] - ctx.data->samples[i];
    res2 += r * r;
  }
  IterationRecord rec;
  rec.k = static_cast<int>(st.records.size()) + 1;
  rec.kind = kind;
  rec.RES = std::sqrt(res2);
  rec.F = (opt.nonneg && min_value(x_new) < -1e-12)
              ? std::numeric_limits<double>::infinity()
              : 0.5 * res2 + opt.lambda * tv_value(x_new);
  if (ctx.re_metric) rec.RE = ctx.re_metric(x_new);
  rec.cpu_seconds = cpu_seconds() - st.cpu0;
  st.records.push_back(rec);
  st.last_f = rec.F;
  st.x_prev = std::move(st.x);
  st.Hx_prev = std::move(st.Hx);
  st.x = std::move(x_new);
  st.Hx = std::move(Hx_new);
}

void direct_update(const SolveContext& ctx, const SolveOptions& opt, const Field& grad,
                   State& st, const char* kind) {
  const double alpha = opt.step_scale / ctx.lipschitz;
  Field z = st.y;
  axpy(-alpha, grad, z);
  Field x_new = prox_tv(z, opt.lambda * alpha, ProxOptions{opt.prox_iters, opt.nonneg});
  accept_iterate(ctx, opt, std::move(x_new), st, kind);
}

std::string stop_reason(const SolveOptions& opt, const State& st) {
  const auto& recs = st.records;
  if (recs.empty()) return "";
  const double f = recs.back().F;
  if (!std::isfinite(f) || f > opt.divergence_factor * st.f0) return "diverged";
  if (recs.size() >= 2) {
    const double fp = recs[recs.size() - 2].F;
    const double den = std::max(fp, f);
    if (den == 0.0) return "tolerance";
    if ((fp - f) / den < opt.eps_d) return "tolerance";
  }
  return "";
}

void momentum_update(const SolveOptions& opt, State& st) {
  double theta = 0.0;
  if (opt.momentum) {
    const double t_new = (1.0 + std::sqrt(1.0 + 4.0 * st.t * st.t)) / 2.0;
    theta = (st.t - 1.0) / t_new;
    st.t = t_new;
  }
  if (theta == 0.0) {
    st.y = st.x;
    st.Hy = st.Hx;
    return;
  }
  st.y = st.x;
  for (std::size_t i = 0; i < st.y.size(); ++i)
    st.y[i] += theta * (st.x[i] - st.x_prev[i]);
  st.Hy = st.Hx;
  for (std::size_t i = 0; i < st.Hy.samples.size(); ++i)
    st.Hy.samples[i] += theta * (st.Hx.samples[i] - st.Hx_prev.samples[i]);
}

}  // namespace pg_detail

SolveResult proximal_gradient_solve(const SolveContext& ctx, SolveOptions opt, const Field* x0) {
  opt.validate();
  if (!ctx.H || !ctx.data) throw std::invalid_argument("solver: missing operator or data");
  if (!(ctx.lipschitz > 0)) throw std::invalid_argument("solver: lipschitz must be positive");

  pg_detail::State st;
  pg_detail::init(ctx, opt, x0, st);

  std::string reason = "max-iters";
  for (int k = 1; k <= opt.max_iters; ++k) {
    Field grad = ctx.H->adjoint(sensor_sub(st.Hy, *ctx.data));
    pg_detail::direct_update(ctx, opt, grad, st, "direct");
    const std::string s = pg_detail::stop_reason(opt, st);
    if (!s.empty()) {
      reason = s;
      break;
    }
    pg_detail::momentum_update(opt, st);
  }

  SolveResult res;
  res.x = std::move(st.x);
  res.records = std::move(st.records);
  res.stop_reason = reason;
  res.f_initial = st.f0;
  res.f_final = res.records.empty() ? st.f0 : res.records.back().F;
  return res;
}

SolveResult ista(const SolveContext& ctx, SolveOptions opt, const Field* x0) {
  opt.momentum = false;
  return proximal_gradient_solve(ctx, opt, x0);
}

SolveResult fista(const SolveContext& ctx, SolveOptions opt, const Field* x0) {
  opt.momentum = true;
  return proximal_gradient_solve(ctx, opt, x0);
}

}  // namespace patmg
