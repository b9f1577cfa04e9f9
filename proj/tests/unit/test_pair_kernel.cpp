#include <random>

#include "compumat/dipole.hpp"
#include "compumat/simd/pair_kernel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compumat;

namespace {

struct Layer {
  std::vector<double> x, y, q;
  simd::DipoleLayer view() const { return {x, y, q}; }
};

Layer random_layer(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> pos(-0.02, 0.02);
  std::uniform_real_distribution<double> mom(-4e-4, 4e-4);
  Layer l;
  for (std::size_t i = 0; i < n; ++i) {
    l.x.push_back(pos(rng));
    l.y.push_back(pos(rng));
    l.q.push_back(mom(rng));
  }
  return l;
}

bool close(double a, double b, double scale, double tol) { return std::abs(a - b) <= tol * scale; }

}  // namespace

TEST_CASE("scalar kernel agrees with the general vector formula") {
  std::mt19937_64 rng(11);
  const Layer lo = random_layer(rng, 7), up = random_layer(rng, 5);
  const double dz = 6e-4;
  Vec3 f;
  double e = 0;
  double scale = 0;
  for (std::size_t j = 0; j < up.x.size(); ++j)
    for (std::size_t i = 0; i < lo.x.size(); ++i) {
      const Vec3 r{up.x[j] - lo.x[i], up.y[j] - lo.y[i], dz};
      const Vec3 term = dipole_dipole_force({0, 0, lo.q[i]}, {0, 0, up.q[j]}, r);
      f += term;
      scale += norm(term);
      e += dipole_dipole_energy({0, 0, lo.q[i]}, {0, 0, up.q[j]}, r);
    }
  const auto s = simd::pair_sums_scalar(lo.view(), up.view(), dz);
  CHECK(close(s.fx, f.x, scale, 1e-14));
  CHECK(close(s.fy, f.y, scale, 1e-14));
  CHECK(close(s.fz, f.z, scale, 1e-14));
  CHECK(oracle::rel_err(s.energy, e) < 1e-12);
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("avx2 kernel is equivalent to the scalar reference") {
  if (!simd::isa_supported(simd::Isa::avx2)) {
    MESSAGE("avx2 not available on this CPU; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(99);
  for (std::size_t nl : {0u, 1u, 3u, 4u, 5u, 17u, 64u, 257u}) {
    for (std::size_t nu : {1u, 9u, 64u}) {
      const Layer lo = random_layer(rng, nl), up = random_layer(rng, nu);
      const double dz = 5e-4;
      const auto a = simd::pair_sums(simd::Isa::scalar, lo.view(), up.view(), dz);
      const auto b = simd::pair_sums(simd::Isa::avx2, lo.view(), up.view(), dz);
      // Sum of magnitudes bounds the rounding of either summation order.
      Layer absl = lo, absu = up;
      for (auto& q : absl.q) q = std::abs(q);
      for (auto& q : absu.q) q = std::abs(q);
      const auto mag = simd::pair_sums_scalar(absl.view(), absu.view(), dz);
      const double scale = std::abs(mag.fz) + std::abs(mag.fx) + std::abs(mag.fy) + std::abs(mag.energy) + 1e-300;
      CHECK(close(a.fx, b.fx, scale, 1e-13));
      CHECK(close(a.fy, b.fy, scale, 1e-13));
      CHECK(close(a.fz, b.fz, scale, 1e-13));
      CHECK(close(a.energy, b.energy, scale, 1e-13));
    }
  }
}

TEST_CASE("coincident pair is flagged by every variant") {
  const std::vector<double> x{0.0, 1e-3, 2e-3, 3e-3, 4e-3}, y{0, 0, 0, 0, 0}, q{1, 1, 1, 1, 1};
  const std::vector<double> ux{2e-3}, uy{0.0}, uq{1.0};
  const simd::DipoleLayer lo{x, y, q}, up{ux, uy, uq};
  CHECK(simd::pair_sums(simd::Isa::scalar, lo, up, 0.0).degenerate);
  CHECK(simd::pair_sums(simd::Isa::avx2, lo, up, 0.0).degenerate);
  CHECK_FALSE(simd::pair_sums(simd::Isa::avx2, lo, up, 1e-4).degenerate);
}

TEST_CASE("dispatch reports a supported isa") {
  CHECK(simd::isa_supported(simd::active_isa()));
  CHECK(simd::isa_name(simd::Isa::scalar) == "scalar");
}
