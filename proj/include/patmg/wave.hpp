#pragma once
#include <memory>
#include <stdexcept>
#include <vector>

#include "patmg/field.hpp"
#include "patmg/grid.hpp"
#include "patmg/medium.hpp"
#include "patmg/sensors.hpp"

namespace patmg {

struct DivergenceError : std::runtime_error {
  int time_index;
  explicit DivergenceError(int step)
      : std::runtime_error("wave solve diverged (non-finite field) at time step " +
                           std::to_string(step)),
        time_index(step) {}
};

enum class AbsorptionPath {
  automatic,       // lossy branch iff the medium absorbs anywhere
  force_lossy,     // run the dispersive-loss branch even if alpha0 == 0
  force_lossless,
};

struct WaveOptions {
  AbsorptionPath path = AbsorptionPath::automatic;
  bool pml = true;            // damping layer on/off (off only in tests)
  int record_every = 0;       // >0: keep every k-th pressure snapshot plus the final one
};

struct RunDiagnostics {
  std::vector<Field> pressure;             // snapshots when record_every > 0
  std::vector<int> recorded_steps;
  std::vector<int> adjoint_source_steps;   // adjoint steps with a nonzero injected source
};

// k-space pseudospectral propagator pair for the photoacoustic problem.
// `forward` maps an interior initial-pressure image to sensor time series;
// `adjoint` is its transpose (exact up to roundoff by construction).
// The object is immutable after construction; every run owns its scratch
// state, so one instance may be shared across threads.
class ForwardOperator {
 public:
  ForwardOperator(Grid g, Medium m, SensorArray sensors, bool smooth_sources = true,
                  WaveOptions opt = {});
  ~ForwardOperator();
  ForwardOperator(ForwardOperator&&) noexcept;
  ForwardOperator& operator=(ForwardOperator&&) noexcept = delete;
  ForwardOperator(const ForwardOperator&) = delete;

  const Grid& grid() const { return grid_; }
  const Medium& medium() const { return medium_; }
  const SensorArray& sensors() const { return sensors_; }
  const SensorWeights& weights() const { return weights_; }
  bool smoothing() const { return smooth_; }
  bool lossy() const { return lossy_; }

  // H: interior image -> sensor data
  SensorData forward(const Field& image, RunDiagnostics* diag = nullptr) const;
  // H^T: sensor data -> interior image
  Field adjoint(const SensorData& data, RunDiagnostics* diag = nullptr) const;
  // propagate a caller-prepared full-grid initial pressure (no smoothing/embedding)
  SensorData forward_full(const Field& p0_full, RunDiagnostics* diag = nullptr) const;

  // conventional time-reversal reconstruction: re-emit the (time-reversed) data
  // as a Dirichlet condition at the sensor nodes in a sign-flipped-dispersion
  // medium; returns the final interior pressure.
  Field time_reversal(const SensorData& data, RunDiagnostics* diag = nullptr) const;

 private:
  Grid grid_;
  Medium medium_;
  SensorArray sensors_;
  SensorWeights weights_;
  bool smooth_;
  bool lossy_;
  WaveOptions opt_;
  struct Tables;
  std::unique_ptr<const Tables> tables_;
};

}  // namespace patmg
