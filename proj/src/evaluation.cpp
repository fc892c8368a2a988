#include "patmg/evaluation.hpp"

#include <cmath>

#include "patmg/measurement.hpp"

namespace patmg {

double relative_error_percent(const Field& x, const Field& truth) {
  if (!x.same_shape(truth)) throw std::invalid_argument("relative_error: shape mismatch");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - truth[i];
    num += d * d;
    den += truth[i] * truth[i];
  }
  if (den == 0) throw std::invalid_argument("relative_error: zero ground truth");
  return 100.0 * std::sqrt(num / den);
}

double relative_error_percent(const Field& x, const Grid& gx, const Field& truth,
                              const Grid& gt) {
  Field xr = resample_image(x, gx, gt);
  return relative_error_percent(xr, truth);
}

double residual_norm(const ForwardOperator& H, const Field& x, const SensorData& data) {
  SensorData Hx = H.forward(x);
  double s = 0;
  for (std::size_t i = 0; i < Hx.samples.size(); ++i) {
    const double r = Hx.samples[i] - data.samples[i];
    s += r * r;
  }
  return std::sqrt(s);
}

Field time_reversal(const ForwardOperator& op, const SensorData& data) {
  return op.time_reversal(data);
}

Field visualize_image(const Field& x, double thresh) {
  Field img = x;
  if (x.rank() == 3) {
    // maximum-intensity projection along z
    Field mip({x.dim(0), x.dim(1)});
    for (int i = 0; i < x.dim(0); ++i)
      for (int j = 0; j < x.dim(1); ++j) {
        double m = x.at(i, j, 0);
        for (int k = 1; k < x.dim(2); ++k) m = std::max(m, x.at(i, j, k));
        mip.at(i, j) = m;
      }
    img = std::move(mip);
  }
  const double peak = norm_inf(img);
  if (peak == 0) return img;
  for (double& v : img) {
    v = 2.0 * v / peak;
    if (std::abs(v) < thresh) v = 0.0;
  }
  return img;
}

}  // namespace patmg
