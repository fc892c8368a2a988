#include "patmg/sensors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace patmg {

SensorArray make_arc_sensors(int count, double radius, std::array<double, 2> center,
                             double start_deg, double span_deg) {
  if (count < 1) throw std::invalid_argument("make_arc_sensors: count must be >= 1");
  SensorArray s;
  s.positions.reserve(count);
  const double d2r = std::numbers::pi / 180.0;
  for (int i = 0; i < count; ++i) {
    // endpoints included
    double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    double ang = (start_deg + frac * span_deg) * d2r;
    s.positions.push_back({center[0] + radius * std::cos(ang),
                           center[1] + radius * std::sin(ang), 0.0});
  }
  return s;
}

double norm2(const SensorData& d) {
  double s = 0;
  for (double x : d.samples) s += x * x;
  return std::sqrt(s);
}

double dot(const SensorData& a, const SensorData& b) {
  if (a.samples.size() != b.samples.size())
    throw std::invalid_argument("SensorData dot: size mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.samples.size(); ++i) s += a.samples[i] * b.samples[i];
  return s;
}

SensorWeights::SensorWeights(const Grid& g, const SensorArray& sensors) {
  ns_ = sensors.count();
  corners_ = 1 << g.rank;
  idx_.resize(static_cast<std::size_t>(ns_) * corners_);
  w_.resize(static_cast<std::size_t>(ns_) * corners_);

  std::ostringstream err;
  for (int s = 0; s < ns_; ++s) {
    int base[3] = {0, 0, 0};
    double frac[3] = {0, 0, 0};
    for (int a = 0; a < g.rank; ++a) {
      // cell-centered: interior node i sits at (i+0.5)*dx
      const double pos = sensors.positions[s][a] / g.spacing[a] - 0.5;
      const int n_int = g.interior_dim(a);
      if (pos < 0.0 || pos > n_int - 1) {
        err << "sensor " << s << " lies outside the interior box on axis " << a << "; ";
        continue;
      }
      double fidx = pos + g.pml_thickness;  // full-grid fractional index
      int i0 = static_cast<int>(std::floor(fidx));
      if (i0 > g.dims[a] - 2) i0 = g.dims[a] - 2;
      base[a] = i0;
      frac[a] = fidx - i0;
    }
    for (int c = 0; c < corners_; ++c) {
      std::size_t flat = 0;
      double w = 1.0;
      for (int a = 0; a < g.rank; ++a) {
        const int bit = (c >> (g.rank - 1 - a)) & 1;
        flat = flat * g.dims[a] + (base[a] + bit);
        w *= bit ? frac[a] : 1.0 - frac[a];
      }
      idx_[static_cast<std::size_t>(s) * corners_ + c] = flat;
      w_[static_cast<std::size_t>(s) * corners_ + c] = w;
    }
  }
  std::string e = err.str();
  if (!e.empty()) throw std::invalid_argument("invalid sensor layout: " + e);
}

void SensorWeights::sample(const Field& full, double* out) const {
  for (int s = 0; s < ns_; ++s) {
    double acc = 0;
    const std::size_t off = static_cast<std::size_t>(s) * corners_;
    for (int c = 0; c < corners_; ++c) acc += w_[off + c] * full[idx_[off + c]];
    out[s] = acc;
  }
}

void SensorWeights::scatter(const double* in, Field& full) const {
  for (int s = 0; s < ns_; ++s) {
    const std::size_t off = static_cast<std::size_t>(s) * corners_;
    for (int c = 0; c < corners_; ++c) full[idx_[off + c]] += w_[off + c] * in[s];
  }
}

}  // namespace patmg
