#pragma once
#include <array>
#include <complex>
#include <span>
#include <vector>

#include "patmg/field.hpp"

namespace patmg {

// Half-spectrum dims of a real transform: last axis becomes n/2+1.
std::vector<int> spectral_dims(std::span<const int> dims);

// Number of threads used by subsequently created FFT plans. Returns false when
// the library was built without FFT threading.
bool set_fft_threads(int n);

// Real-to-complex FFT workspace for one grid shape. Holds plans and buffers;
// not thread-safe, create one per running solve.
class FftWorkspace {
 public:
  explicit FftWorkspace(std::span<const int> dims);
  FftWorkspace(const FftWorkspace&) = delete;
  FftWorkspace& operator=(const FftWorkspace&) = delete;
  ~FftWorkspace();

  // Transform `in` and keep the spectrum; several inverse_with calls may reuse it.
  void forward(const Field& in);
  // out = IFFT(spectrum .* mult); normalization folded in.
  void inverse_with(std::span<const std::complex<double>> mult, Field& out);
  void inverse_with(std::span<const double> mult, Field& out);
  void inverse_plain(Field& out);

  std::span<const std::complex<double>> spectrum() const;
  std::size_t spectrum_size() const { return nspec_; }
  std::span<const int> dims() const { return {dims_.data(), dims_.size()}; }

 private:
  std::vector<int> dims_;
  std::size_t nreal_ = 0, nspec_ = 0;
  double inv_n_ = 0;
  double* real_ = nullptr;
  std::complex<double>* spec_ = nullptr;
  std::complex<double>* work_ = nullptr;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  void run_inverse(Field& out);
};

// out = IFFT(mult .* FFT(in)) in one call.
void apply_spectral_multiplier(FftWorkspace& ws, const Field& in,
                               std::span<const double> mult, Field& out);
void apply_spectral_multiplier(FftWorkspace& ws, const Field& in,
                               std::span<const std::complex<double>> mult, Field& out);

// Visit every half-spectrum point; f(idx0, idx1, idx2, flat) with idx* full-axis
// DFT indices (unused axes are 0).
template <class F>
void for_each_spectral(std::span<const int> dims, F&& f) {
  const int rank = static_cast<int>(dims.size());
  const int n0 = dims[0];
  const int n1 = rank > 1 ? dims[1] : 1;
  const int n2 = rank > 2 ? dims[2] : 1;
  const int last = rank - 1;
  const int h0 = last == 0 ? n0 / 2 + 1 : n0;
  const int h1 = last == 1 ? n1 / 2 + 1 : n1;
  const int h2 = last == 2 ? n2 / 2 + 1 : n2;
  std::size_t flat = 0;
  for (int i0 = 0; i0 < h0; ++i0)
    for (int i1 = 0; i1 < h1; ++i1)
      for (int i2 = 0; i2 < h2; ++i2, ++flat) f(i0, i1, i2, flat);
}

}  // namespace patmg
