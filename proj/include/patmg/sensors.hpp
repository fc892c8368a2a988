#pragma once
#include <array>
#include <vector>

#include "patmg/field.hpp"
#include "patmg/grid.hpp"

namespace patmg {

// Detector positions in meters, relative to the interior-box origin
// (cell-centered: interior node i sits at (i+0.5)*spacing).
struct SensorArray {
  std::vector<std::array<double, 3>> positions;
  int count() const { return static_cast<int>(positions.size()); }
};

// count detectors on a circular arc around `center` (2D).
SensorArray make_arc_sensors(int count, double radius, std::array<double, 2> center,
                             double start_deg, double span_deg);

// Recorded pressure time series: sample n of sensor s is p(t=(n+1)*dt).
struct SensorData {
  int num_sensors = 0;
  int nt = 0;
  double dt = 0;
  std::vector<double> samples;  // [s*nt + n]

  SensorData() = default;
  SensorData(int ns, int nt_, double dt_)
      : num_sensors(ns), nt(nt_), dt(dt_), samples(static_cast<std::size_t>(ns) * nt_, 0.0) {}
  double& at(int s, int n) { return samples[static_cast<std::size_t>(s) * nt + n]; }
  double at(int s, int n) const { return samples[static_cast<std::size_t>(s) * nt + n]; }
};

double norm2(const SensorData& d);
double dot(const SensorData& a, const SensorData& b);

// Multilinear interpolation operator between off-grid sensor positions and the
// full grid. `sample` is the measurement map M, `scatter` its transpose.
class SensorWeights {
 public:
  SensorWeights() = default;
  SensorWeights(const Grid& g, const SensorArray& sensors);

  int num_sensors() const { return ns_; }
  int corners() const { return corners_; }

  void sample(const Field& full, double* out) const;
  void scatter(const double* in, Field& full) const;

  // flat node indices / weights of sensor s (corners() entries each)
  std::span<const std::size_t> node_indices(int s) const {
    return {idx_.data() + static_cast<std::size_t>(s) * corners_, static_cast<std::size_t>(corners_)};
  }
  std::span<const double> node_weights(int s) const {
    return {w_.data() + static_cast<std::size_t>(s) * corners_, static_cast<std::size_t>(corners_)};
  }

 private:
  int ns_ = 0;
  int corners_ = 0;
  std::vector<std::size_t> idx_;
  std::vector<double> w_;
};

}  // namespace patmg
