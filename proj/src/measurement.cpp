#include "patmg/measurement.hpp"

#include <algorithm>
#include <cmath>

#include "patmg/spectral.hpp"

namespace patmg {

namespace {

double dist_point_segment(const double* p, const std::array<double, 3>& a,
                          const std::array<double, 3>& b, int rank) {
  double ab2 = 0, ap_ab = 0;
  for (int k = 0; k < rank; ++k) {
    ab2 += (b[k] - a[k]) * (b[k] - a[k]);
    ap_ab += (p[k] - a[k]) * (b[k] - a[k]);
  }
  double t = ab2 == 0 ? 0.0 : std::clamp(ap_ab / ab2, 0.0, 1.0);
  double d2 = 0;
  for (int k = 0; k < rank; ++k) {
    double q = a[k] + t * (b[k] - a[k]);
    d2 += (p[k] - q) * (p[k] - q);
  }
  return std::sqrt(d2);
}

}  // namespace

Field make_phantom(const Grid& g, const PhantomSpec& spec) {
  Field img(g.interior_dims());
  const int nx = img.dim(0);
  const int ny = g.rank > 1 ? img.dim(1) : 1;
  const int nz = g.rank > 2 ? img.dim(2) : 1;
  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) {
        double pos[3] = {node_coord(ix, g.spacing[0]),
                         g.rank > 1 ? node_coord(iy, g.spacing[1]) : 0.0,
                         g.rank > 2 ? node_coord(iz, g.spacing[2]) : 0.0};
        double v = 0;
        for (const auto& c : spec.vessels)
          if (dist_point_segment(pos, c.a, c.b, g.rank) <= c.radius) v += c.amplitude;
        for (const auto& d : spec.discs) {
          double r2 = 0;
          for (int k = 0; k < g.rank; ++k) r2 += (pos[k] - d.center[k]) * (pos[k] - d.center[k]);
          if (r2 <= d.radius * d.radius) v += d.amplitude;
        }
        img[flat] = std::min(v, spec.amplitude_max);
      }
  return img;
}

Medium make_layered_medium(const Grid& g, const TissueLayout& t) {
  Medium m;
  std::vector<int> d(g.dims.begin(), g.dims.begin() + g.rank);
  m.c0 = Field(d);
  m.rho0 = Field(d);
  m.alpha0 = Field(d);
  m.y = t.y;

  const double r_outer = t.skin_outer_radius;
  const double r_inner = t.skin_outer_radius - t.skin_thickness;
  const int p = g.pml_thickness;
  const int nx = g.dims[0];
  const int ny = g.rank > 1 ? g.dims[1] : 1;
  const int nz = g.rank > 2 ? g.dims[2] : 1;
  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) {
        // full-grid cell centers in interior coordinates
        double pos[3] = {node_coord(ix - p, g.spacing[0]),
                         g.rank > 1 ? node_coord(iy - p, g.spacing[1]) : 0.0,
                         g.rank > 2 ? node_coord(iz - p, g.spacing[2]) : 0.0};
        double r2 = 0;
        for (int k = 0; k < g.rank; ++k) r2 += (pos[k] - t.center[k]) * (pos[k] - t.center[k]);
        const double r = std::sqrt(r2);
        double c, rho, a0;
        if (r > r_outer) {
          c = t.water_c;
          rho = t.water_rho;
          a0 = t.alpha0_water;
        } else if (r > r_inner) {
          c = t.skin_c;
          rho = t.skin_rho;
          a0 = t.alpha0_tissue;
        } else {
          c = t.fat_c;
          rho = t.fat_rho;
          a0 = t.alpha0_tissue;
        }
        m.c0[flat] = c;
        m.rho0[flat] = rho;
        m.alpha0[flat] = a0;
      }
  derive_loss_coefficients(m);
  return m;
}

void add_awgn(std::span<double> x, double snr_db, std::mt19937_64& rng) {
  if (snr_db == 0.0 || x.empty()) return;
  double power = 0;
  for (double v : x) power += v * v;
  power /= static_cast<double>(x.size());
  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  std::normal_distribution<double> n(0.0, sigma);
  for (double& v : x) v += n(rng);
}

void add_awgn(SensorData& d, double snr_db, std::mt19937_64& rng) {
  add_awgn(std::span<double>(d.samples.data(), d.samples.size()), snr_db, rng);
}

Medium make_perturbed_medium(const Grid& g, const TissueLayout& t, const MediumPerturbation& p,
                             std::mt19937_64& rng) {
  TissueLayout shifted = t;
  shifted.skin_outer_radius -= p.interface_shift;
  Medium m = make_layered_medium(g, shifted);
  if (p.snr_db != 0.0) {
    add_awgn(std::span<double>(m.c0.data(), m.c0.size()), p.snr_db, rng);
    add_awgn(std::span<double>(m.rho0.data(), m.rho0.size()), p.snr_db, rng);
    add_awgn(std::span<double>(m.alpha0.data(), m.alpha0.size()), p.snr_db, rng);
    for (double& a : m.alpha0) a = std::max(a, 0.0);
  }
  if (p.smooth)
    smooth_medium(m);
  else
    derive_loss_coefficients(m);
  return m;
}

Field resample_image(const Field& src, const Grid& src_grid, const Grid& dst_grid) {
  if (src_grid.rank != dst_grid.rank)
    throw std::invalid_argument("resample_image: rank mismatch");
  const int rank = src_grid.rank;
  Field out(dst_grid.interior_dims());
  const int nx = out.dim(0);
  const int ny = rank > 1 ? out.dim(1) : 1;
  const int nz = rank > 2 ? out.dim(2) : 1;

  auto sample = [&](double f0, double f1, double f2) {
    int base[3];
    double frac[3];
    double fr[3] = {f0, f1, f2};
    for (int a = 0; a < rank; ++a) {
      const int n = src.dim(a);
      double x = std::clamp(fr[a], 0.0, static_cast<double>(n - 1));
      int i0 = std::min(static_cast<int>(std::floor(x)), n - 2 < 0 ? 0 : n - 2);
      base[a] = i0;
      frac[a] = x - i0;
    }
    double acc = 0;
    const int corners = 1 << rank;
    for (int c = 0; c < corners; ++c) {
      double w = 1;
      std::size_t flat = 0;
      for (int a = 0; a < rank; ++a) {
        const int bit = (c >> (rank - 1 - a)) & 1;
        w *= bit ? frac[a] : 1.0 - frac[a];
        flat = flat * src.dim(a) + std::min(base[a] + bit, src.dim(a) - 1);
      }
      acc += w * src[flat];
    }
    return acc;
  };

  std::size_t flat = 0;
  for (int ix = 0; ix < nx; ++ix)
    for (int iy = 0; iy < ny; ++iy)
      for (int iz = 0; iz < nz; ++iz, ++flat) {
        // cell center of dst -> fractional source index
        double f[3] = {0, 0, 0};
        int idx[3] = {ix, iy, iz};
        for (int a = 0; a < rank; ++a)
          f[a] = node_coord(idx[a], dst_grid.spacing[a]) / src_grid.spacing[a] - 0.5;
        out[flat] = sample(f[0], f[1], f[2]);
      }
  return out;
}

}  // namespace patmg
