#include "patmg/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace patmg {

namespace {
// FFTW's planner is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

std::vector<int> spectral_dims(std::span<const int> dims) {
  std::vector<int> d(dims.begin(), dims.end());
  d.back() = d.back() / 2 + 1;
  return d;
}

bool set_fft_threads(int n) {
#ifdef PATMG_FFTW_THREADS
  std::lock_guard<std::mutex> lock(planner_mutex());
  static bool initialized = fftw_init_threads() != 0;
  if (!initialized) return false;
  fftw_plan_with_nthreads(n > 0 ? n : 1);
  return true;
#else
  (void)n;
  return false;
#endif
}

FftWorkspace::FftWorkspace(std::span<const int> dims) : dims_(dims.begin(), dims.end()) {
  if (dims_.empty() || dims_.size() > 3) throw std::invalid_argument("FftWorkspace: rank 1..3");
  nreal_ = 1;
  for (int d : dims_) nreal_ *= static_cast<std::size_t>(d);
  auto sd = spectral_dims(dims_);
  nspec_ = 1;
  for (int d : sd) nspec_ *= static_cast<std::size_t>(d);
  inv_n_ = 1.0 / static_cast<double>(nreal_);

  real_ = fftw_alloc_real(nreal_);
  spec_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(nspec_));
  work_ = reinterpret_cast<std::complex<double>*>(fftw_alloc_complex(nspec_));
  if (!real_ || !spec_ || !work_) throw std::bad_alloc();

  std::lock_guard<std::mutex> lock(planner_mutex());
  // measured plans pay for themselves over the thousands of transforms a
  // solve performs; tiny grids stick with heuristic plans (wisdom caches the
  // measurement, so repeated same-size workspaces plan instantly)
  const unsigned flags = nreal_ >= 4096 ? FFTW_MEASURE : FFTW_ESTIMATE;
  plan_fwd_ = fftw_plan_dft_r2c(static_cast<int>(dims_.size()), dims_.data(), real_,
                                reinterpret_cast<fftw_complex*>(spec_), flags);
  plan_inv_ = fftw_plan_dft_c2r(static_cast<int>(dims_.size()), dims_.data(),
                                reinterpret_cast<fftw_complex*>(work_), real_, flags);
  if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("FFTW plan creation failed");
}

FftWorkspace::~FftWorkspace() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(real_);
  fftw_free(spec_);
  fftw_free(work_);
}

void FftWorkspace::forward(const Field& in) {
  if (in.size() != nreal_) throw std::invalid_argument("FftWorkspace::forward: size mismatch");
  std::copy(in.data(), in.data() + nreal_, real_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
}

void FftWorkspace::run_inverse(Field& out) {
  if (out.size() != nreal_) throw std::invalid_argument("FftWorkspace: output size mismatch");
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  std::copy(real_, real_ + nreal_, out.data());
}

void FftWorkspace::inverse_with(std::span<const std::complex<double>> mult, Field& out) {
  if (mult.size() != nspec_) throw std::invalid_argument("FftWorkspace: multiplier size mismatch");
  for (std::size_t i = 0; i < nspec_; ++i) work_[i] = spec_[i] * mult[i] * inv_n_;
  run_inverse(out);
}

void FftWorkspace::inverse_with(std::span<const double> mult, Field& out) {
  if (mult.size() != nspec_) throw std::invalid_argument("FftWorkspace: multiplier size mismatch");
  for (std::size_t i = 0; i < nspec_; ++i) work_[i] = spec_[i] * (mult[i] * inv_n_);
  run_inverse(out);
}

void FftWorkspace::inverse_plain(Field& out) {
  for (std::size_t i = 0; i < nspec_; ++i) work_[i] = spec_[i] * inv_n_;
  run_inverse(out);
}

std::span<const std::complex<double>> FftWorkspace::spectrum() const {
  return {spec_, nspec_};
}

void apply_spectral_multiplier(FftWorkspace& ws, const Field& in, std::span<const double> mult,
                               Field& out) {
  ws.forward(in);
  ws.inverse_with(mult, out);
}

void apply_spectral_multiplier(FftWorkspace& ws, const Field& in,
                               std::span<const std::complex<double>> mult, Field& out) {
  ws.forward(in);
  ws.inverse_with(mult, out);
}

}  // namespace patmg
