#include <doctest.h>

#include <numbers>
#include <random>

#include "patmg/fft.hpp"
#include "patmg/spectral.hpp"
#include "support.hpp"

using namespace patmg;
using doctest::Approx;

TEST_CASE("r2c/c2r round trip is the identity") {
  std::mt19937_64 rng(5);
  for (auto dims : {std::vector<int>{16}, std::vector<int>{8, 12}, std::vector<int>{6, 4, 8}}) {
    Field f = testsup::random_field(dims, rng);
    FftWorkspace ws(dims);
    Field out(dims);
    ws.forward(f);
    ws.inverse_plain(out);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(out[i] == Approx(f[i]).epsilon(1e-12));
  }
}

TEST_CASE("spectral derivative of a sine is exact to roundoff") {
  const int n = 32;
  const double dx = 0.1;
  const double L = n * dx;
  Field f(std::vector<int>{n, n});
  const double k = 2 * std::numbers::pi * 3 / L;  // 3 periods along x
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.at(i, j) = std::sin(k * i * dx) + 0.3 * std::cos(k * j * dx);
  std::array<double, 2> sp{dx, dx};
  Field dfx = spectral_derivative(f, sp, 0);
  Field dfy = spectral_derivative(f, sp, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(dfx.at(i, j) == Approx(k * std::cos(k * i * dx)).epsilon(1e-10).scale(k));
      CHECK(dfy.at(i, j) == Approx(-0.3 * k * std::sin(k * j * dx)).epsilon(1e-10).scale(k));
    }
}

TEST_CASE("fractional laplacian with s=1 reproduces the laplacian") {
  const int n = 24;
  const double dx = 0.05;
  Field f(std::vector<int>{n, n});
  const double kx = 2 * std::numbers::pi * 2 / (n * dx);
  const double ky = 2 * std::numbers::pi * 5 / (n * dx);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f.at(i, j) = std::sin(kx * i * dx) * std::cos(ky * j * dx);
  std::array<double, 2> sp{dx, dx};
  Field lap = fractional_laplacian(f, sp, 1.0);
  const double expect = kx * kx + ky * ky;  // (-lap) sin sin = |k|^2 sin sin
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(lap[i] == Approx(expect * f[i]).epsilon(1e-10).scale(expect));
}

TEST_CASE("fractional laplacian annihilates constants for positive orders") {
  Field f(std::vector<int>{12, 12});
  f.fill(3.5);
  std::array<double, 2> sp{0.1, 0.1};
  for (double s : {0.25, 0.5, 1.0, 1.5}) {
    Field out = fractional_laplacian(f, sp, s);
    for (double v : out) CHECK(v == Approx(0.0).scale(1.0));
  }
}

TEST_CASE("source smoothing window: unit DC gain, zero Nyquist gain") {
  CHECK(blackman_axis_gain(0, 16) == Approx(1.0).epsilon(1e-15));
  CHECK(blackman_axis_gain(8, 16) == Approx(0.0).scale(1.0));
  for (int i = 0; i < 16; ++i) {
    const double gain = blackman_axis_gain(i, 16);
    CHECK(gain >= -1e-15);
    CHECK(gain <= 1.0 + 1e-15);
  }
  // symmetric in +/- k
  CHECK(blackman_axis_gain(3, 16) == Approx(blackman_axis_gain(13, 16)).epsilon(1e-14));
}

TEST_CASE("source smoothing preserves constants and total mean") {
  Field f(std::vector<int>{16, 16});
  f.fill(2.25);
  Field s = smooth_source(f);
  for (double v : s) CHECK(v == Approx(2.25).epsilon(1e-13));

  std::mt19937_64 rng(9);
  Field r = testsup::random_field(std::vector<int>{16, 16}, rng);
  double mean = 0;
  for (double v : r) mean += v;
  Field sr = smooth_source(r);
  double smean = 0;
  for (double v : sr) smean += v;
  CHECK(smean == Approx(mean).epsilon(1e-12));
}

TEST_CASE("source smoothing is self-adjoint") {
  std::mt19937_64 rng(13);
  Field x = testsup::random_field(std::vector<int>{12, 10}, rng);
  Field y = testsup::random_field(std::vector<int>{12, 10}, rng);
  CHECK(dot(smooth_source(x), y) == Approx(dot(x, smooth_source(y))).epsilon(1e-12));
}

TEST_CASE("medium smoothing keeps absorption nonnegative and rederives loss terms") {
  Grid g = testsup::small_grid(24, 4, 4);
  Medium m = uniform_medium(g, 1500, 1000, 0.75, 1.5);
  // sharpen one spot so the window actually changes something
  m.c0.at(12, 12) = 1800.0;
  m.alpha0.at(12, 12) = 0.0;
  Medium before = m;
  smooth_medium(m);
  CHECK(min_value(m.alpha0) >= 0.0);
  CHECK(m.c0.at(12, 12) != before.c0.at(12, 12));
  // tau/eta correspond to the smoothed maps
  const double a0 = alpha0_to_si(m.alpha0.at(3, 3), m.y);
  const double want_tau = -2.0 * a0 * std::pow(m.c0.at(3, 3), m.y - 1.0);
  CHECK(m.tau.at(3, 3) == Approx(want_tau).epsilon(1e-12));
}
