#pragma once
#include "patmg/field.hpp"
#include "patmg/grid.hpp"
#include "patmg/sensors.hpp"
#include "patmg/wave.hpp"

namespace patmg {

// RE in percent: 100 * ||x - truth|| / ||truth||, same-grid images.
double relative_error_percent(const Field& x, const Field& truth);

// Same, with x living on grid gx and truth on grid gt: x is resampled onto gt.
double relative_error_percent(const Field& x, const Grid& gx, const Field& truth,
                              const Grid& gt);

// ||Hx - data||
double residual_norm(const ForwardOperator& H, const Field& x, const SensorData& data);

// Conventional time-reversal baseline (wrapper over the propagator).
Field time_reversal(const ForwardOperator& op, const SensorData& data);

// Display normalization: scale to peak 2 and zero entries below `thresh`
// (of the scaled magnitude). 3D images are first collapsed by a maximum-
// intensity projection along the last axis.
Field visualize_image(const Field& x, double thresh = 0.1);

}  // namespace patmg
