#include "patmg/wave.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numbers>

#include "patmg/fft.hpp"
#include "patmg/spectral.hpp"

namespace patmg {

namespace {

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

// damping factor per half-application: exp(-alpha_max * ramp^4 * c_ref*dt/(2*dx)),
// quartic ramp over the layer; staggered variant evaluated at i+1/2
std::vector<double> pml_profile(int n, int layer, double alpha_max, double c_ref, double dt,
                                double dx, bool staggered, bool enabled) {
  std::vector<double> f(n, 1.0);
  if (!enabled || layer <= 0 || alpha_max == 0.0) return f;
  const double scale = alpha_max * c_ref * dt / (2.0 * dx);
  for (int i = 0; i < n; ++i) {
    const double pos = i + (staggered ? 0.5 : 0.0);
    double depth = 0.0;
    if (pos < layer)
      depth = (layer - pos) / layer;
    else if (pos > n - 1 - layer)
      depth = (pos - (n - 1 - layer)) / layer;
    if (depth > 0.0) f[i] = std::exp(-scale * depth * depth * depth * depth);
  }
  return f;
}

}  // namespace

struct AxisPml {
  std::vector<double> reg, sg;
};

struct ForwardOperator::Tables {
  std::vector<int> fdims;
  std::size_t nspec = 0;
  std::vector<std::vector<std::complex<double>>> grad_mult, div_mult;
  std::vector<double> absorb1, absorb2;  // |k|^(y-2), |k|^(y-1)
  std::vector<AxisPml> pml;
  Field c0sq, inv_rho0;
  // sensor-node aggregation for the time-reversal Dirichlet condition
  std::vector<std::size_t> tr_nodes;
  std::vector<std::vector<std::pair<int, double>>> tr_node_w;
  std::vector<double> tr_wsum;
};

ForwardOperator::~ForwardOperator() = default;
ForwardOperator::ForwardOperator(ForwardOperator&&) noexcept = default;

ForwardOperator::ForwardOperator(Grid g, Medium m, SensorArray sensors, bool smooth_sources,
                                 WaveOptions opt)
    : grid_(g),
      medium_(std::move(m)),
      sensors_(std::move(sensors)),
      weights_(g, sensors_),
      smooth_(smooth_sources),
      opt_(opt) {
  grid_.validate();
  medium_.validate(grid_);
  if (medium_.tau.empty() || medium_.eta.empty())
    throw std::invalid_argument("medium loss coefficients not derived");
  switch (opt.path) {
    case AbsorptionPath::automatic: lossy_ = !medium_.lossless(); break;
    case AbsorptionPath::force_lossy: lossy_ = true; break;
    case AbsorptionPath::force_lossless: lossy_ = false; break;
  }

  auto t = std::make_unique<Tables>();
  t->fdims.assign(grid_.dims.begin(), grid_.dims.begin() + grid_.rank);
  const int rank = grid_.rank;

  std::vector<std::vector<double>> kax(rank);
  for (int a = 0; a < rank; ++a) kax[a] = axis_wavenumbers(grid_.dims[a], grid_.spacing[a]);

  auto sd = spectral_dims(t->fdims);
  t->nspec = 1;
  for (int d : sd) t->nspec *= static_cast<std::size_t>(d);
  t->grad_mult.assign(rank, std::vector<std::complex<double>>(t->nspec));
  t->div_mult.assign(rank, std::vector<std::complex<double>>(t->nspec));
  t->absorb1.assign(t->nspec, 0.0);
  t->absorb2.assign(t->nspec, 0.0);

  const double y = medium_.y;
  for_each_spectral(t->fdims, [&](int i0, int i1, int i2, std::size_t flat) {
    const int idx[3] = {i0, i1, i2};
    double k2 = 0;
    for (int a = 0; a < rank; ++a) k2 += kax[a][idx[a]] * kax[a][idx[a]];
    const double kmag = std::sqrt(k2);
    const double kappa = sinc(grid_.c_ref * kmag * grid_.dt / 2.0);
    for (int a = 0; a < rank; ++a) {
      const double ka = kax[a][idx[a]];
      const double half = ka * grid_.spacing[a] / 2.0;
      const std::complex<double> ik(0.0, ka * kappa);
      t->grad_mult[a][flat] = ik * std::complex<double>(std::cos(half), std::sin(half));
      t->div_mult[a][flat] = ik * std::complex<double>(std::cos(half), -std::sin(half));
    }
    t->absorb1[flat] = kmag == 0.0 ? 0.0 : std::pow(kmag, y - 2.0);
    t->absorb2[flat] = kmag == 0.0 ? 0.0 : std::pow(kmag, y - 1.0);
  });

  t->pml.resize(rank);
  for (int a = 0; a < rank; ++a) {
    t->pml[a].reg = pml_profile(grid_.dims[a], grid_.pml_thickness, grid_.pml_alpha_max,
                                grid_.c_ref, grid_.dt, grid_.spacing[a], false, opt_.pml);
    t->pml[a].sg = pml_profile(grid_.dims[a], grid_.pml_thickness, grid_.pml_alpha_max,
                               grid_.c_ref, grid_.dt, grid_.spacing[a], true, opt_.pml);
  }

  t->c0sq = zeros_like(medium_.c0);
  t->inv_rho0 = zeros_like(medium_.rho0);
  for (std::size_t i = 0; i < t->c0sq.size(); ++i) {
    t->c0sq[i] = medium_.c0[i] * medium_.c0[i];
    t->inv_rho0[i] = 1.0 / medium_.rho0[i];
  }

  std::map<std::size_t, std::vector<std::pair<int, double>>> agg;
  for (int s = 0; s < weights_.num_sensors(); ++s) {
    auto idx = weights_.node_indices(s);
    auto w = weights_.node_weights(s);
    for (std::size_t c = 0; c < idx.size(); ++c)
      if (w[c] != 0.0) agg[idx[c]].emplace_back(s, w[c]);
  }
  for (auto& [node, list] : agg) {
    t->tr_nodes.push_back(node);
    double ws = 0;
    for (auto& [s, w] : list) ws += w;
    t->tr_wsum.push_back(ws);
    t->tr_node_w.push_back(std::move(list));
  }

  tables_ = std::move(t);
}

namespace {

struct RunState {
  FftWorkspace ws;
  Field p, t1, t2, rho_tot;
  std::vector<Field> u, rho, du;
  explicit RunState(const std::vector<int>& dims, int rank)
      : ws(dims), p(dims), t1(dims), t2(dims), rho_tot(dims) {
    std::span<const int> d(dims.data(), dims.size());
    u.assign(rank, Field(d));
    rho.assign(rank, Field(d));
    du.assign(rank, Field(d));
  }
};

template <class F>
void for_cells(const std::vector<int>& dims, F&& f) {
  const int nx = dims[0];
  const int ny = dims.size() > 1 ? dims[1] : 1;
  const int nz = dims.size() > 2 ? dims[2] : 1;
  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) f(ix, iy, iz, flat);
}

inline int axis_index(int a, int ix, int iy, int iz) { return a == 0 ? ix : (a == 1 ? iy : iz); }

void check_finite(const Field& f, int step) {
  for (double v : f)
    if (!std::isfinite(v)) throw DivergenceError(step);
}

void maybe_record(RunDiagnostics* diag, int record_every, int n, int nt, const Field& p) {
  if (diag && record_every > 0 && (n % record_every == 0 || n == nt - 1)) {
    diag->pressure.push_back(p);
    diag->recorded_steps.push_back(n);
  }
}

}  // namespace

SensorData ForwardOperator::forward_full(const Field& p0_full, RunDiagnostics* diag) const {
  const Tables& tb = *tables_;
  const int rank = grid_.rank;
  RunState st(tb.fdims, rank);

  st.p = p0_full;
  for (int a = 0; a < rank; ++a)
    for (std::size_t i = 0; i < st.p.size(); ++i)
      st.rho[a][i] = p0_full[i] / (rank * tb.c0sq[i]);

  SensorData data(weights_.num_sensors(), grid_.nt, grid_.dt);
  std::vector<double> samp(weights_.num_sensors());

  for (int n = 0; n < grid_.nt; ++n) {
    const double dtn = (n == 0) ? grid_.dt / 2.0 : grid_.dt;

    // u^{n+1/2} = A_s(A_s u^{n-1/2} - dtn (1/rho0) grad p^n)
    st.ws.forward(st.p);
    for (int a = 0; a < rank; ++a) {
      st.ws.inverse_with(tb.grad_mult[a], st.t1);
      const auto& pml = tb.pml[a].sg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml[axis_index(a, ix, iy, iz)];
        st.u[a][i] = f * (f * st.u[a][i] - dtn * tb.inv_rho0[i] * st.t1[i]);
      });
    }

    // rho_a^{n+1} = A(A rho_a^n - dt rho0 div_a u_a), du kept for the loss term
    for (int a = 0; a < rank; ++a) {
      st.ws.forward(st.u[a]);
      st.ws.inverse_with(tb.div_mult[a], st.du[a]);
      const auto& pml = tb.pml[a].reg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml[axis_index(a, ix, iy, iz)];
        st.rho[a][i] = f * (f * st.rho[a][i] - grid_.dt * medium_.rho0[i] * st.du[a][i]);
      });
    }

    for (std::size_t i = 0; i < st.rho_tot.size(); ++i) {
      double s = st.rho[0][i];
      for (int a = 1; a < rank; ++a) s += st.rho[a][i];
      st.rho_tot[i] = s;
    }

    // equation of state: p = c0^2 (rho + tau L_{y-2}(rho0 div u) - eta L_{y-1}(rho))
    if (lossy_) {
      for (std::size_t i = 0; i < st.t1.size(); ++i) {
        double dv = st.du[0][i];
        for (int a = 1; a < rank; ++a) dv += st.du[a][i];
        st.t1[i] = medium_.rho0[i] * dv;
      }
      st.ws.forward(st.t1);
      st.ws.inverse_with(tb.absorb1, st.t1);
      st.ws.forward(st.rho_tot);
      st.ws.inverse_with(tb.absorb2, st.t2);
      for (std::size_t i = 0; i < st.p.size(); ++i)
        st.p[i] = tb.c0sq[i] *
                  (st.rho_tot[i] + medium_.tau[i] * st.t1[i] - medium_.eta[i] * st.t2[i]);
    } else {
      for (std::size_t i = 0; i < st.p.size(); ++i) st.p[i] = tb.c0sq[i] * st.rho_tot[i];
    }

    check_finite(st.p, n);
    weights_.sample(st.p, samp.data());
    for (int s = 0; s < weights_.num_sensors(); ++s) data.at(s, n) = samp[s];
    maybe_record(diag, opt_.record_every, n, grid_.nt, st.p);
  }
  return data;
}

SensorData ForwardOperator::forward(const Field& image, RunDiagnostics* diag) const {
  Field img = smooth_ ? smooth_source(image) : image;
  return forward_full(embed_interior(img, grid_), diag);
}

// Exact transpose of forward(): same tables, reversed recursion. Adjoint state
// (U = staggered adjoint velocity, R_a = per-axis adjoint density) evolves
// forward in adjoint time j, consuming data column n = nt-1-j.
Field ForwardOperator::adjoint(const SensorData& data, RunDiagnostics* diag) const {
  if (data.num_sensors != weights_.num_sensors() || data.nt != grid_.nt)
    throw std::invalid_argument("adjoint: data shape does not match operator");
  const Tables& tb = *tables_;
  const int rank = grid_.rank;
  RunState st(tb.fdims, rank);
  Field pbar(std::span<const int>(tb.fdims.data(), tb.fdims.size()));
  Field w1 = pbar, w2 = pbar;

  for (int j = 0; j < grid_.nt; ++j) {
    const int n = grid_.nt - 1 - j;

    // pbar = M^T h[:,n] + dt sum_b div_b((1/rho0) A_sb U_b)
    pbar.fill(0.0);
    bool any_source = false;
    for (int s = 0; s < data.num_sensors; ++s)
      if (data.at(s, n) != 0.0) {
        any_source = true;
        break;
      }
    if (any_source) {
      std::vector<double> col(data.num_sensors);
      for (int s = 0; s < data.num_sensors; ++s) col[s] = data.at(s, n);
      weights_.scatter(col.data(), pbar);
      if (diag) diag->adjoint_source_steps.push_back(j);
    }
    for (int b = 0; b < rank; ++b) {
      const auto& pml = tb.pml[b].sg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        st.t1[i] = tb.inv_rho0[i] * pml[axis_index(b, ix, iy, iz)] * st.u[b][i];
      });
      st.ws.forward(st.t1);
      st.ws.inverse_with(tb.div_mult[b], st.t2);
      axpy(grid_.dt, st.t2, pbar);
    }

    // transpose of the equation of state
    for (std::size_t i = 0; i < w1.size(); ++i) w1[i] = tb.c0sq[i] * pbar[i];  // c^2 pbar
    if (lossy_) {
      // rho increment: c^2 pbar - L_{y-1}(eta c^2 pbar)
      for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = medium_.eta[i] * w1[i];
      st.ws.forward(w2);
      st.ws.inverse_with(tb.absorb2, w2);
      for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = w1[i] - w2[i];
    } else {
      w2 = w1;
    }
    for (int a = 0; a < rank; ++a) axpy(1.0, w2, st.rho[a]);

    // velocity update: U_a = A_s^2 U_a + dt grad_a(rho0 A_a R_a) [- grad_a(rho0 L_{y-2}(tau c^2 pbar))]
    if (lossy_) {
      for (std::size_t i = 0; i < st.t2.size(); ++i) st.t2[i] = medium_.tau[i] * w1[i];
      st.ws.forward(st.t2);
      st.ws.inverse_with(tb.absorb1, st.t2);
      for (std::size_t i = 0; i < st.t2.size(); ++i) st.t2[i] *= medium_.rho0[i];
      // st.t2 = rho0 L_{y-2}(tau c^2 pbar); gradient applied per axis below
    }
    for (int a = 0; a < rank; ++a) {
      const auto& pml_r = tb.pml[a].reg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        st.t1[i] = medium_.rho0[i] * pml_r[axis_index(a, ix, iy, iz)] * st.rho[a][i];
      });
      st.ws.forward(st.t1);
      st.ws.inverse_with(tb.grad_mult[a], w1);
      const auto& pml_s = tb.pml[a].sg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml_s[axis_index(a, ix, iy, iz)];
        st.u[a][i] = f * f * st.u[a][i] + grid_.dt * w1[i];
      });
    }
    if (lossy_) {
      st.ws.forward(st.t2);
      for (int a = 0; a < rank; ++a) {
        st.ws.inverse_with(tb.grad_mult[a], w1);
        axpy(-1.0, w1, st.u[a]);
      }
    }

    // density propagation: R_a = A_a^2 R_a
    for (int a = 0; a < rank; ++a) {
      const auto& pml = tb.pml[a].reg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml[axis_index(a, ix, iy, iz)];
        st.rho[a][i] *= f * f;
      });
    }

    check_finite(st.rho[0], j);
    maybe_record(diag, opt_.record_every, j, grid_.nt, st.rho[0]);
  }

  // tail: transpose of the initial half-step and of the initial conditions
  // x = (1/(d c^2)) sum_a R_a + (dt/2) sum_b div_b((1/rho0) A_sb U_b)
  pbar.fill(0.0);
  for (int b = 0; b < rank; ++b) {
    const auto& pml = tb.pml[b].sg;
    for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
      st.t1[i] = tb.inv_rho0[i] * pml[axis_index(b, ix, iy, iz)] * st.u[b][i];
    });
    st.ws.forward(st.t1);
    st.ws.inverse_with(tb.div_mult[b], st.t2);
    axpy(grid_.dt / 2.0, st.t2, pbar);
  }
  for (std::size_t i = 0; i < pbar.size(); ++i) {
    double s = st.rho[0][i];
    for (int a = 1; a < rank; ++a) s += st.rho[a][i];
    pbar[i] += s / (rank * tb.c0sq[i]);
  }

  Field out = extract_interior(pbar, grid_);
  if (smooth_) out = smooth_source(out);
  return out;
}

Field ForwardOperator::time_reversal(const SensorData& data, RunDiagnostics* diag) const {
  if (data.num_sensors != weights_.num_sensors() || data.nt != grid_.nt)
    throw std::invalid_argument("time_reversal: data shape does not match operator");
  const Tables& tb = *tables_;
  const int rank = grid_.rank;
  RunState st(tb.fdims, rank);

  for (int n = 0; n < grid_.nt; ++n) {
    st.ws.forward(st.p);
    for (int a = 0; a < rank; ++a) {
      st.ws.inverse_with(tb.grad_mult[a], st.t1);
      const auto& pml = tb.pml[a].sg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml[axis_index(a, ix, iy, iz)];
        st.u[a][i] = f * (f * st.u[a][i] - grid_.dt * tb.inv_rho0[i] * st.t1[i]);
      });
    }
    for (int a = 0; a < rank; ++a) {
      st.ws.forward(st.u[a]);
      st.ws.inverse_with(tb.div_mult[a], st.du[a]);
      const auto& pml = tb.pml[a].reg;
      for_cells(tb.fdims, [&](int ix, int iy, int iz, std::size_t i) {
        const double f = pml[axis_index(a, ix, iy, iz)];
        st.rho[a][i] = f * (f * st.rho[a][i] - grid_.dt * medium_.rho0[i] * st.du[a][i]);
      });
    }
    for (std::size_t i = 0; i < st.rho_tot.size(); ++i) {
      double s = st.rho[0][i];
      for (int a = 1; a < rank; ++a) s += st.rho[a][i];
      st.rho_tot[i] = s;
    }
    if (lossy_) {
      // sign-flipped dispersion: tau -> -tau compensates absorption on the way back
      for (std::size_t i = 0; i < st.t1.size(); ++i) {
        double dv = st.du[0][i];
        for (int a = 1; a < rank; ++a) dv += st.du[a][i];
        st.t1[i] = medium_.rho0[i] * dv;
      }
      st.ws.forward(st.t1);
      st.ws.inverse_with(tb.absorb1, st.t1);
      st.ws.forward(st.rho_tot);
      st.ws.inverse_with(tb.absorb2, st.t2);
      for (std::size_t i = 0; i < st.p.size(); ++i)
        st.p[i] = tb.c0sq[i] *
                  (st.rho_tot[i] - medium_.tau[i] * st.t1[i] - medium_.eta[i] * st.t2[i]);
    } else {
      for (std::size_t i = 0; i < st.p.size(); ++i) st.p[i] = tb.c0sq[i] * st.rho_tot[i];
    }

    // Dirichlet condition: overwrite sensor nodes with the reversed data
    const int col = grid_.nt - 1 - n;
    for (std::size_t q = 0; q < tb.tr_nodes.size(); ++q) {
      double acc = 0;
      for (auto& [s, w] : tb.tr_node_w[q]) acc += w * data.at(s, col);
      const double val = acc / tb.tr_wsum[q];
      const std::size_t node = tb.tr_nodes[q];
      st.p[node] = val;
      for (int a = 0; a < rank; ++a) st.rho[a][node] = val / (rank * tb.c0sq[node]);
    }

    check_finite(st.p, n);
    maybe_record(diag, opt_.record_every, n, grid_.nt, st.p);
  }
  return extract_interior(st.p, grid_);
}

}  // namespace patmg
