#include <doctest.h>

#include <random>

#include "patmg/wave.hpp"
#include "support.hpp"

using namespace patmg;
using doctest::Approx;

namespace {

// |<Hx, y> - <x, H^T y>| / max(|<Hx,y>|, |<x,H^T y>|)
double dot_test(const ForwardOperator& op, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Field x = testsup::random_interior(op.grid(), rng);
  SensorData y = testsup::random_data(op.sensors().count(), op.grid().nt, op.grid().dt, rng);
  SensorData Hx = op.forward(x);
  Field Hty = op.adjoint(y);
  const double a = dot(Hx, y);
  const double b = dot(x, Hty);
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

TEST_CASE("adjoint dot test, lossless medium") {
  Grid g = testsup::small_grid(32, 6, 48);
  Medium m = uniform_medium(g, 1500, 1000, 0, 1.5);
  ForwardOperator op(g, m, testsup::ring_sensors(g, 7), true);
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u})
    CHECK(dot_test(op, seed) < 1e-11);
}

TEST_CASE("adjoint dot test, lossy heterogeneous medium") {
  Grid g = testsup::small_grid(32, 6, 48);
  Medium m = uniform_medium(g, 1500, 1000, 0.75, 1.5);
  // make the maps genuinely heterogeneous
  for (int i = 0; i < g.dims[0]; ++i)
    for (int j = 0; j < g.dims[1]; ++j) {
      m.c0.at(i, j) = 1450 + 6.0 * ((i * 13 + j * 7) % 19);
      m.rho0.at(i, j) = 950 + 9.0 * ((i * 5 + j * 11) % 17);
      m.alpha0.at(i, j) = 0.2 + 0.05 * ((i + 2 * j) % 13);
    }
  derive_loss_coefficients(m);
  ForwardOperator op(g, m, testsup::ring_sensors(g, 7), true);
  for (std::uint64_t seed : {11u, 12u, 13u, 14u, 15u})
    CHECK(dot_test(op, seed) < 1e-11);
}

TEST_CASE("adjoint dot test with smoothing disabled and an odd-sized grid") {
  Grid g = testsup::small_grid(27, 5, 33);
  g.dims[1] = 31;  // non-square, odd along both axes
  Medium m = uniform_medium(g, 1520, 990, 0.4, 1.3);
  ForwardOperator op(g, m, testsup::ring_sensors(g, 5), false);
  for (std::uint64_t seed : {21u, 22u, 23u})
    CHECK(dot_test(op, seed) < 1e-11);
}

TEST_CASE("adjoint dot test in 3d") {
  Grid g;
  g.rank = 3;
  g.dims = {18, 16, 20};
  g.spacing = {2e-4, 2e-4, 2e-4};
  g.pml_thickness = 4;
  g.pml_alpha_max = 2.0;
  g.dt = 2e-8;
  g.nt = 16;
  g.c_ref = 1500;
  Medium m = uniform_medium(g, 1500, 1000, 0.75, 1.5);
  SensorArray arr;
  const double e0 = g.interior_extent(0), e1 = g.interior_extent(1), e2 = g.interior_extent(2);
  std::mt19937_64 prng(77);
  std::uniform_real_distribution<double> u(0.25, 0.75);
  for (int s = 0; s < 6; ++s) arr.positions.push_back({u(prng) * e0, u(prng) * e1, u(prng) * e2});
  ForwardOperator op(g, m, arr, true);
  for (std::uint64_t seed : {31u, 32u, 33u})
    CHECK(dot_test(op, seed) < 1e-11);
}

TEST_CASE("adjoint dot test on a non-square grid") {
  // unequal axis lengths catch transposed fft plans / swapped dims
  Grid g;
  g.rank = 2;
  g.dims = {64, 24, 1};
  g.spacing = {2e-4, 2e-4, 2e-4};
  g.pml_thickness = 8;
  g.pml_alpha_max = 2.0;
  g.dt = 2e-8;
  g.nt = 50;
  g.c_ref = 1500;
  Medium m = uniform_medium(g, 1500, 1000, 0.75, 1.5);
  SensorArray arr;
  arr.positions.push_back({0.3 * g.interior_extent(0), 0.7 * g.interior_extent(1), 0});
  arr.positions.push_back({0.62 * g.interior_extent(0), 0.2 * g.interior_extent(1), 0});
  ForwardOperator op(g, m, arr, true);
  for (std::uint64_t seed : {41u, 42u, 43u})
    CHECK(dot_test(op, seed) < 1e-11);
}

TEST_CASE("adjoint output is insensitive to trailing zero data columns") {
  // sanity guard for the time indexing: padding the recording with silence
  // must not change the adjoint image
  Grid g = testsup::small_grid(28, 5, 30);
  Medium m = uniform_medium(g, 1500, 1000, 0, 1.5);
  SensorArray arr = testsup::ring_sensors(g, 5);
  ForwardOperator op(g, m, arr, true);
  std::mt19937_64 rng(55);
  SensorData d = testsup::random_data(5, g.nt, g.dt, rng);
  for (int s = 0; s < 5; ++s)
    for (int n = 20; n < g.nt; ++n) d.at(s, n) = 0.0;
  Field a = op.adjoint(d);

  Grid g2 = g;
  g2.nt = 40;  // longer recording, same content
  ForwardOperator op2(g2, m, arr, true);
  SensorData d2(5, g2.nt, g2.dt);
  for (int s = 0; s < 5; ++s)
    for (int n = 0; n < 20; ++n) d2.at(s, n) = d.at(s, n);
  Field b = op2.adjoint(d2);
  const double scale = norm_inf(a);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == Approx(b[i]).epsilon(1e-9).scale(scale));
}
