#include <random>

#include "compumat/dipole.hpp"
#include "compumat/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compumat;

TEST_CASE("coaxial parallel dipoles attract with the textbook magnitude") {
  const double m = 3.04e-4, g = 5e-4;
  const Vec3 f = dipole_dipole_force({0, 0, m}, {0, 0, m}, {0, 0, g});
  const double expected = 3.0 * kMu0 * m * m / (2.0 * M_PI * std::pow(g, 4));
  CHECK(f.x == 0.0);
  CHECK(f.y == 0.0);
  CHECK(f.z < 0.0);
  CHECK(oracle::rel_err(-f.z, expected) < 1e-14);
}

TEST_CASE("side by side like dipoles: zero normal force, repulsive energy") {
  const double m = 2.0e-4, rho = 2e-3;
  const Vec3 f = dipole_dipole_force({0, 0, m}, {0, 0, m}, {rho, 0, 0});
  CHECK(f.z == 0.0);
  const double u = dipole_dipole_energy({0, 0, m}, {0, 0, m}, {rho, 0, 0});
  CHECK(oracle::rel_err(u, kMu0 * m * m / (4.0 * M_PI * rho * rho * rho)) < 1e-14);
}

TEST_CASE("zero separation is degenerate") {
  CHECK_THROWS_AS(dipole_dipole_force({0, 0, 1}, {0, 0, 1}, {0, 0, 0}), DegenerateGeometryError);
  CHECK_THROWS_AS(dipole_dipole_energy({0, 0, 1}, {0, 0, 1}, {0, 0, 0}), DegenerateGeometryError);
}

// F = -grad_r U by central differences, step 1e-6 m.
TEST_CASE("force is minus the energy gradient") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vec3 m1{unit(rng), unit(rng), unit(rng)};
    const Vec3 m2{unit(rng), unit(rng), unit(rng)};
    Vec3 r{unit(rng), unit(rng), unit(rng)};
    r = (0.005 + 0.01 * std::abs(unit(rng))) / norm(r) * r;
    const double h = 1e-6;
    auto u = [&](Vec3 p) { return dipole_dipole_energy(m1, m2, p); };
    const Vec3 grad{(u(r + Vec3{h, 0, 0}) - u(r - Vec3{h, 0, 0})) / (2 * h),
                    (u(r + Vec3{0, h, 0}) - u(r - Vec3{0, h, 0})) / (2 * h),
                    (u(r + Vec3{0, 0, h}) - u(r - Vec3{0, 0, h})) / (2 * h)};
    const Vec3 f = dipole_dipole_force(m1, m2, r);
    CHECK(norm(f + grad) / norm(f) <= 1e-6);
  }
}

TEST_CASE("third law on a single pair") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const Vec3 m1{unit(rng), unit(rng), unit(rng)}, m2{unit(rng), unit(rng), unit(rng)};
    const Vec3 r{unit(rng) * 1e-2, unit(rng) * 1e-2, unit(rng) * 1e-2};
    const Vec3 f12 = dipole_dipole_force(m1, m2, r);
    const Vec3 f21 = dipole_dipole_force(m2, m1, -r);
    CHECK(norm(f12 + f21) <= 1e-12 * norm(f12));
  }
}
