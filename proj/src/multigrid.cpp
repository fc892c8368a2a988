#include "patmg/multigrid.hpp"

#include <algorithm>
#include <cmath>

#include "patmg/fft.hpp"

namespace patmg {

namespace {

// apply a 1D line operation along `axis`, mapping length n_in to n_out
template <class LineOp>
Field apply_along_axis(const Field& in, int axis, int n_out, LineOp&& op) {
  std::vector<int> odims(in.dims().begin(), in.dims().end());
  odims[axis] = n_out;
  Field out(odims);

  const int n_in = in.dim(axis);
  std::size_t stride = 1;
  for (int a = axis + 1; a < in.rank(); ++a) stride *= static_cast<std::size_t>(in.dim(a));
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(in.dim(a));
  std::size_t inner = stride;

  std::vector<double> line_in(n_in), line_out(n_out);
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < inner; ++i) {
      const std::size_t base_in = o * n_in * inner + i;
      const std::size_t base_out = o * n_out * inner + i;
      for (int j = 0; j < n_in; ++j) line_in[j] = in[base_in + j * inner];
      op(line_in, line_out);
      for (int j = 0; j < n_out; ++j) out[base_out + j * inner] = line_out[j];
    }
  return out;
}

// fine j draws from coarse floor(j/2 - 0.25) and its neighbor with weights
// (1-w, w), w in {0.25, 0.75}; out-of-range parents fold onto the edge cell
void prolong_line(const std::vector<double>& c, std::vector<double>& f) {
  const int n = static_cast<int>(c.size());
  for (int j = 0; j < 2 * n; ++j) {
    const double s = 0.5 * j - 0.25;
    const int i0 = static_cast<int>(std::floor(s));
    const double w = s - i0;
    const int a = std::clamp(i0, 0, n - 1);
    const int b = std::clamp(i0 + 1, 0, n - 1);
    f[j] = (1.0 - w) * c[a] + w * c[b];
  }
}

// exact transpose of prolong_line, scaled by 1/2
void restrict_line(const std::vector<double>& f, std::vector<double>& c) {
  const int n = static_cast<int>(c.size());
  std::fill(c.begin(), c.end(), 0.0);
  for (int j = 0; j < 2 * n; ++j) {
    const double s = 0.5 * j - 0.25;
    const int i0 = static_cast<int>(std::floor(s));
    const double w = s - i0;
    c[std::clamp(i0, 0, n - 1)] += 0.5 * (1.0 - w) * f[j];
    c[std::clamp(i0 + 1, 0, n - 1)] += 0.5 * w * f[j];
  }
}

void min_line(const std::vector<double>& f, std::vector<double>& c) {
  const int nf = static_cast<int>(f.size());
  const int n = static_cast<int>(c.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, 2 * i - 1);
    const int hi = std::min(nf - 1, 2 * i + 2);
    double m = f[lo];
    for (int j = lo + 1; j <= hi; ++j) m = std::min(m, f[j]);
    c[i] = m;
  }
}

void check_even(const Field& fine) {
  for (int a = 0; a < fine.rank(); ++a)
    if (fine.dim(a) % 2 != 0)
      throw std::invalid_argument("restriction requires even dimensions");
}

}  // namespace

Field prolong_image(const Field& coarse) {
  Field out = coarse;
  for (int a = 0; a < coarse.rank(); ++a)
    out = apply_along_axis(out, a, 2 * out.dim(a), prolong_line);
  return out;
}

Field restrict_image(const Field& fine) {
  check_even(fine);
  Field out = fine;
  for (int a = fine.rank() - 1; a >= 0; --a)
    out = apply_along_axis(out, a, out.dim(a) / 2, restrict_line);
  return out;
}

Field support_min(const Field& fine) {
  check_even(fine);
  Field out = fine;
  for (int a = fine.rank() - 1; a >= 0; --a)
    out = apply_along_axis(out, a, out.dim(a) / 2, min_line);
  return out;
}

Field restrict_constraint_bounds(const Field& y) {
  Field b = restrict_image(y);
  Field m = support_min(y);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= m[i];
  return b;
}

SensorData restrict_data(const SensorData& fine) {
  if (fine.nt % 2 != 0) throw std::invalid_argument("restrict_data: nt must be even");
  const int nt = fine.nt;
  const int ntc = nt / 2;
  SensorData out(fine.num_sensors, ntc, 2.0 * fine.dt);

  std::vector<int> dims{nt};
  FftWorkspace ws(dims);
  // keep bins up to the coarse Nyquist (fine bin nt/4), zero the rest
  std::vector<double> mask(ws.spectrum_size(), 0.0);
  for (std::size_t m = 0; m < mask.size(); ++m)
    if (m <= static_cast<std::size_t>(nt / 4)) mask[m] = 1.0;

  Field row(dims), filtered(dims);
  for (int s = 0; s < fine.num_sensors; ++s) {
    for (int n = 0; n < nt; ++n) row[n] = fine.at(s, n);
    ws.forward(row);
    ws.inverse_with(mask, filtered);
    // coarse sample n' is fine time (2n'+1+1)*dt... coarse t=(n'+1)*2dt == fine index 2n'+1
    for (int n = 0; n < ntc; ++n) out.at(s, n) = filtered[2 * n + 1];
  }
  return out;
}

Grid coarsen_grid(const Grid& fine) {
  Grid c = fine;
  for (int a = 0; a < fine.rank; ++a) {
    if (fine.dims[a] % 2 != 0)
      throw std::invalid_argument("coarsen_grid: dims must be even");
    c.dims[a] = fine.dims[a] / 2;
    c.spacing[a] = fine.spacing[a] * 2;
  }
  if (fine.pml_thickness % 2 != 0)
    throw std::invalid_argument("coarsen_grid: pml_thickness must be even");
  if (fine.nt % 2 != 0) throw std::invalid_argument("coarsen_grid: nt must be even");
  c.pml_thickness = fine.pml_thickness / 2;
  c.dt = fine.dt * 2;
  c.nt = fine.nt / 2;
  c.validate();
  return c;
}

Medium coarsen_medium(const Medium& fine) {
  Medium c;
  c.c0 = restrict_image(fine.c0);
  c.rho0 = restrict_image(fine.rho0);
  c.alpha0 = restrict_image(fine.alpha0);
  for (double& a : c.alpha0) a = std::max(a, 0.0);
  c.y = fine.y;
  derive_loss_coefficients(c);
  return c;
}

namespace {

double inner(const Field& a, const Field& b) { return dot(a, b); }

double coarse_objective(const SolveContext& coarse, const SolveOptions& base, double rho,
                        const Field& v, const Field& x, const SensorData& Hx) {
  double res2 = 0;
  for (std::size_t i = 0; i < Hx.samples.size(); ++i) {
    const double r = Hx.samples[i] - coarse.data->samples[i];
    res2 += r * r;
  }
  return 0.5 * res2 + base.lambda * tv_smooth_value(x, rho) + inner(v, x);
}

// smoothed, linearly corrected coarse solve started at x0 with projection
// x >= bounds; returns the final iterate (x0 itself when opt.q_c == 0)
Field coarse_solve(const SolveContext& coarse, const MgOptions& opt, const SolveOptions& base,
                   const Field& x0, const SensorData& Hx0, const Field& v, const Field& bounds,
                   int* iters_out) {
  const int d = x0.rank();
  const double L = coarse.lipschitz + base.lambda * 4.0 * d / opt.rho_tv;
  // canonical step per family: plain gradient steps tolerate 2/L, momentum needs 1/L
  const double alpha = opt.coarse_step_scale * (base.momentum ? 1.0 : 2.0) / L;

  Field x = x0, x_prev = x0, y = x0;
  SensorData Hx = Hx0, Hx_prev = Hx0, Hy = Hx0;
  double t = 1.0;
  double phi_prev = coarse_objective(coarse, base, opt.rho_tv, v, x0, Hx0);
  int iters = 0;

  for (int it = 1; it <= opt.q_c; ++it) {
    SensorData resid = Hy;
    for (std::size_t i = 0; i < resid.samples.size(); ++i)
      resid.samples[i] -= coarse.data->samples[i];
    Field g = coarse.H->adjoint(resid);
    Field gtv = tv_smooth_grad(y, opt.rho_tv);
    axpy(base.lambda, gtv, g);
    axpy(1.0, v, g);

    Field x_new = y;
    axpy(-alpha, g, x_new);
    for (std::size_t i = 0; i < x_new.size(); ++i) x_new[i] = std::max(x_new[i], bounds[i]);

    SensorData Hx_new = coarse.H->forward(x_new);
    const double phi = coarse_objective(coarse, base, opt.rho_tv, v, x_new, Hx_new);
    iters = it;

    x_prev = std::move(x);
    Hx_prev = std::move(Hx);
    x = std::move(x_new);
    Hx = std::move(Hx_new);

    const double den = std::max({std::abs(phi_prev), std::abs(phi), 1e-300});
    if ((phi_prev - phi) / den < opt.eps_c) break;
    phi_prev = phi;

    double theta = 0.0;
    if (base.momentum) {
      const double t_new = (1.0 + std::sqrt(1.0 + 4.0 * t * t)) / 2.0;
      theta = (t - 1.0) / t_new;
      t = t_new;
    }
    if (theta == 0.0) {
      y = x;
      Hy = Hx;
    } else {
      y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += theta * (x[i] - x_prev[i]);
      Hy = Hx;
      for (std::size_t i = 0; i < Hy.samples.size(); ++i)
        Hy.samples[i] += theta * (Hx.samples[i] - Hx_prev.samples[i]);
    }
  }
  if (iters_out) *iters_out = iters;
  return x;
}

}  // namespace

SolveResult mg_solve(const SolveContext& fine, const SolveContext& coarse, const MgOptions& opt,
                     MgStats* stats, const Field* x0) {
  SolveOptions base = opt.base;
  base.validate();
  if (!fine.H || !coarse.H || !fine.data || !coarse.data)
    throw std::invalid_argument("mg_solve: missing operator or data");
  if (!(fine.lipschitz > 0) || !(coarse.lipschitz > 0))
    throw std::invalid_argument("mg_solve: lipschitz must be positive");
  for (int a = 0; a < fine.H->grid().rank; ++a)
    if (fine.H->grid().interior_dim(a) != 2 * coarse.H->grid().interior_dim(a))
      throw std::invalid_argument("mg_solve: coarse grid must halve the fine interior");
  if (coarse.data->nt != fine.data->nt / 2)
    throw std::invalid_argument("mg_solve: coarse data must halve the fine time axis");

  pg_detail::State st;
  pg_detail::init(fine, base, x0, st);

  MgStats local;
  MgStats& ms = stats ? *stats : local;
  ms.min_iterate = min_value(st.x);

  int K_d = 0, K_r = 0;
  Field ytilde;
  std::string reason = "max-iters";

  for (int k = 1; k <= base.max_iters; ++k) {
    SensorData resid = st.Hy;
    for (std::size_t i = 0; i < resid.samples.size(); ++i)
      resid.samples[i] -= fine.data->samples[i];
    Field grad = fine.H->adjoint(resid);

    bool recurse = false;
    Field g_rho, Rg;
    if (k > 1) {
      g_rho = grad;
      Field gtv = tv_smooth_grad(st.y, opt.rho_tv);
      axpy(base.lambda, gtv, g_rho);
      Rg = restrict_image(g_rho);
      const double gnorm = norm2(g_rho);
      ms.gate_ratios.push_back(gnorm > 0 ? norm2(Rg) / gnorm : 0.0);
      const bool grad_coarse_enough = norm2(Rg) > opt.kappa * gnorm;
      bool moved = true;
      if (K_r > 0 && K_d <= opt.q_d) {
        Field dy = st.y;
        axpy(-1.0, ytilde, dy);
        moved = norm2(dy) > opt.vartheta * norm2(ytilde);
      }
      recurse = grad_coarse_enough && (K_r == 0 || K_d > opt.q_d || moved);
    }

    if (!recurse) {
      ++K_d;
      pg_detail::direct_update(fine, base, grad, st, "direct");
    } else {
      ++K_r;
      K_d = 0;
      ytilde = st.y;
      ++ms.recursions;

      Field x_c0 = restrict_image(st.y);
      SensorData Hc_x0 = coarse.H->forward(x_c0);
      SensorData resid_c = Hc_x0;
      for (std::size_t i = 0; i < resid_c.samples.size(); ++i)
        resid_c.samples[i] -= coarse.data->samples[i];
      Field grad_c = coarse.H->adjoint(resid_c);
      Field gtv_c = tv_smooth_grad(x_c0, opt.rho_tv);
      axpy(base.lambda, gtv_c, grad_c);

      Field v = Rg;
      axpy(-1.0, grad_c, v);

      // first-order coherence holds by construction; record the roundoff
      {
        Field chk = grad_c;
        axpy(1.0, v, chk);
        axpy(-1.0, Rg, chk);
        ms.max_coherence_mismatch = std::max(ms.max_coherence_mismatch, norm_inf(chk));
      }

      Field bounds = x_c0;  // R y
      {
        Field m = support_min(st.y);
        axpy(-1.0, m, bounds);
      }

      int citers = 0;
      Field x_c = coarse_solve(coarse, opt, base, x_c0, Hc_x0, v, bounds, &citers);
      ms.coarse_iters.push_back(citers);

      Field corr = x_c;
      axpy(-1.0, x_c0, corr);
      Field x_new = st.y;
      axpy(1.0, prolong_image(corr), x_new);

      pg_detail::accept_iterate(fine, base, std::move(x_new), st, "recursive");
    }

    ms.min_iterate = std::min(ms.min_iterate, min_value(st.x));
    const std::string s = pg_detail::stop_reason(base, st);
    if (!s.empty()) {
      reason = s;
      break;
    }
    pg_detail::momentum_update(base, st);
  }

  SolveResult res;
  res.x = std::move(st.x);
  res.records = std::move(st.records);
  res.stop_reason = reason;
  res.f_initial = st.f0;
  res.f_final = res.records.empty() ? st.f0 : res.records.back().F;
  return res;
}

}  // namespace patmg
