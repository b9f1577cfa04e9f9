#include <random>

#include "compumat/error.hpp"
#include "compumat/magnetics.hpp"
#include "compumat/sweep_engine.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compumat;

TEST_CASE("sweep value at the identity pose equals the pairwise sum") {
  std::mt19937_64 rng(1);
  const auto a = oracle::random_grid(rng, 8);
  const auto b = oracle::random_grid(rng, 8);
  const auto map = pose_sweep(a, b, 0.5, true);
  CHECK(map.span() == 15);
  CHECK(oracle::rel_err(map.at(Pose{}), pairwise_interaction(a, b, Pose{}, 0.5).normal_force_n) <= 1e-9);
}

TEST_CASE("single-pixel base reproduces the pair kernel") {
  const int n = 5;
  std::vector<std::int8_t> p(n * n, 0);
  p[2 * n + 2] = 1;  // center pixel
  const MagnetPixelGrid delta(n, {}, p);
  // Mating sheet also a centered delta: force at translation d is the kernel at d.
  const auto map = pose_sweep(delta, delta, 0.5, true);
  const double m = delta.moment();
  for (int rot = 0; rot < 4; ++rot)
    for (int dx = -(n - 1); dx <= n - 1; ++dx)
      for (int dy = -(n - 1); dy <= n - 1; ++dy) {
        const double k = pair_kernel_value(dx, dy, 2.0, 0.5, m, m, true);
        CHECK(map.at(rot, dx, dy) == doctest::Approx(k).epsilon(1e-9).scale(0));
      }
}

TEST_CASE("kernel symmetry") {
  for (int u = -6; u <= 6; ++u)
    for (int v = -6; v <= 6; ++v) {
      const double k = pair_kernel_value(u, v, 2.0, 0.5, 1e-4, 2e-4, true);
      CHECK(k == pair_kernel_value(-u, v, 2.0, 0.5, 1e-4, 2e-4, true));
      CHECK(k == pair_kernel_value(v, u, 2.0, 0.5, 1e-4, 2e-4, true));
      CHECK(k == -pair_kernel_value(u, v, 2.0, 0.5, 1e-4, 2e-4, false));
    }
}

TEST_CASE("full sweep equals element-wise brute force") {
  std::mt19937_64 rng(16);
  for (int n : {1, 2, 3, 7, 16}) {
    const auto a = oracle::random_grid(rng, n);
    const auto b = oracle::random_grid(rng, n);
    const auto map = pose_sweep(a, b, 0.5, true);
    double worst = 0.0;
    double peak = 0.0;
    for (int rot = 0; rot < 4; ++rot)
      for (double v : map.slice(rot)) peak = std::max(peak, std::abs(v));
    for (int rot = 0; rot < 4; ++rot)
      for (int dx = -(n - 1); dx <= n - 1; ++dx)
        for (int dy = -(n - 1); dy <= n - 1; ++dy) {
          const double want = oracle::normal_force(a, b, dx * 2.0, dy * 2.0, 90.0 * rot, true, 0.5);
          worst = std::max(worst, oracle::rel_err_floored(map.at(rot, dx, dy), want, 1e-6 * peak));
        }
    CAPTURE(n);
    CHECK(worst <= 1e-9);
  }
}

TEST_CASE("unmated sweep matches brute force too") {
  std::mt19937_64 rng(17);
  const auto a = oracle::random_grid(rng, 4);
  const auto b = oracle::random_grid(rng, 4);
  const auto map = pose_sweep(a, b, 0.8, false);
  for (int rot = 0; rot < 4; ++rot)
    for (int dx = -3; dx <= 3; ++dx)
      for (int dy = -3; dy <= 3; ++dy)
        CHECK(oracle::rel_err_floored(map.at(rot, dx, dy),
                                      pairwise_interaction(a, b, Pose{dx, dy, rot, false}, 0.8).normal_force_n,
                                      1e-12) <= 1e-9);
}

TEST_CASE("mismatched sizes are zero padded; mismatched pitch is rejected") {
  std::mt19937_64 rng(18);
  const auto a = oracle::random_grid(rng, 6);
  const auto b = oracle::random_grid(rng, 4);
  const auto map = pose_sweep(a, b, 0.5);
  CHECK(map.n() == 6);
  const auto padded = pose_sweep(a, b.padded_to(6), 0.5);
  CHECK(map.slice(1) == padded.slice(1));
  const MagnetPixelGrid c(4, Material{1.0, 0.76, 1e5}, std::vector<std::int8_t>(16, 1));
  CHECK_THROWS_AS(pose_sweep(a, c, 0.5), ValidationError);
}

TEST_CASE("negating both grids leaves the map unchanged") {
  std::mt19937_64 rng(19);
  const auto a = oracle::random_grid(rng, 8);
  const auto b = oracle::random_grid(rng, 8);
  const auto m1 = pose_sweep(a, b, 0.5);
  const auto m2 = pose_sweep(a.negated(), b.negated(), 0.5);
  for (int rot = 0; rot < 4; ++rot) CHECK(m1.slice(rot) == m2.slice(rot));
}

TEST_CASE("zero grids sweep to an all-zero map") {
  const auto z = MagnetPixelGrid::zeros(5);
  const auto map = pose_sweep(z, z, 0.5);
  for (int rot = 0; rot < 4; ++rot)
    for (double v : map.slice(rot)) CHECK(v == 0.0);
}

TEST_CASE("engine transform length covers the kernel reach") {
  for (int n : {1, 2, 8, 16, 64}) {
    SweepEngine e(n, 2.0, 0.5, 1e-4, 1e-4, true);
    CHECK(e.fft_size() >= 4 * n - 3);
  }
}
