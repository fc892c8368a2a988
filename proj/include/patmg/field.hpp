#pragma once
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace patmg {

// Dense nd array of doubles, rank 1..3.
// Layout is row-major with axis order (x, y[, z]); the last axis varies fastest:
//   flat = (ix*ny + iy)*nz + iz.
class Field {
 public:
  Field() = default;

  explicit Field(std::span<const int> dims) { reshape(dims); }
  Field(std::initializer_list<int> dims)
      : Field(std::span<const int>(dims.begin(), dims.size())) {}

  void reshape(std::span<const int> dims) {
    if (dims.empty() || dims.size() > 3)
      throw std::invalid_argument("Field: rank must be 1..3");
    rank_ = static_cast<int>(dims.size());
    std::size_t n = 1;
    for (int a = 0; a < 3; ++a) dims_[a] = 1;
    for (int a = 0; a < rank_; ++a) {
      if (dims[a] < 1) throw std::invalid_argument("Field: dims must be positive");
      dims_[a] = dims[a];
      n *= static_cast<std::size_t>(dims[a]);
    }
    v_.assign(n, 0.0);
  }

  int rank() const { return rank_; }
  int dim(int a) const { return dims_[a]; }
  std::span<const int> dims() const { return {dims_.data(), static_cast<std::size_t>(rank_)}; }
  std::size_t size() const { return v_.size(); }
  bool empty() const { return v_.empty(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }

  double& at(int ix, int iy) { return v_[static_cast<std::size_t>(ix) * dims_[1] + iy]; }
  double at(int ix, int iy) const { return v_[static_cast<std::size_t>(ix) * dims_[1] + iy]; }
  double& at(int ix, int iy, int iz) {
    return v_[(static_cast<std::size_t>(ix) * dims_[1] + iy) * dims_[2] + iz];
  }
  double at(int ix, int iy, int iz) const {
    return v_[(static_cast<std::size_t>(ix) * dims_[1] + iy) * dims_[2] + iz];
  }

  auto begin() { return v_.begin(); }
  auto end() { return v_.end(); }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }

  void fill(double x) { std::fill(v_.begin(), v_.end(), x); }

  bool same_shape(const Field& o) const {
    return rank_ == o.rank_ && dims_ == o.dims_;
  }

 private:
  int rank_ = 0;
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<double> v_;
};

inline Field zeros_like(const Field& f) { return Field(f.dims()); }

inline double dot(const Field& a, const Field& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("dot: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const Field& a) { return std::sqrt(dot(a, a)); }

inline double norm_inf(const Field& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double min_value(const Field& a) {
  double m = a.size() ? a[0] : 0.0;
  for (double x : a) m = std::min(m, x);
  return m;
}

inline double max_value(const Field& a) {
  double m = a.size() ? a[0] : 0.0;
  for (double x : a) m = std::max(m, x);
  return m;
}

// y += alpha * x
inline void axpy(double alpha, const Field& x, Field& y) {
  if (!x.same_shape(y)) throw std::invalid_argument("axpy: shape mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline void scale(Field& x, double alpha) {
  for (double& v : x) v *= alpha;
}

inline bool all_finite(const Field& x) {
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace patmg
