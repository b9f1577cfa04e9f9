#pragma once

// Brute-force pair sum between two layers of z-aligned point dipoles.
//
// The lower layer sits in the plane z = 0 and the upper layer in z = dz.
// Every moment is along z, so the general dipole force collapses to
//
//   F = 3e-7 * qa * qb / r^5 * [ (1 - 5c^2) (dx, dy) , dz (3 - 5c^2) ],  c = dz / r
//   U = 1e-7 * qa * qb / r^3 * (1 - 3c^2)
//
// with r pointing from the lower dipole to the upper one. The result is the
// total force on the upper layer and the total energy.
//
// `scalar` is the reference; `avx2` is the 4-wide FMA variant. `pair_sums`
// dispatches at runtime (COMPUMAT_SIMD=scalar forces the reference).

#include <cstddef>
#include <span>
#include <string_view>

namespace compumat::simd {

struct DipoleLayer {
  std::span<const double> x;  // meters
  std::span<const double> y;  // meters
  std::span<const double> q;  // signed moment along +z, A*m^2
};

struct PairSums {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
  double energy = 0.0;
  bool degenerate = false;  // some pair coincided; sums are then meaningless
};

enum class Isa { scalar, avx2 };

PairSums pair_sums_scalar(const DipoleLayer& lower, const DipoleLayer& upper, double dz);
#if defined(__x86_64__) || defined(_M_X64)
PairSums pair_sums_avx2(const DipoleLayer& lower, const DipoleLayer& upper, double dz);
#endif

bool isa_supported(Isa isa);
Isa active_isa();
std::string_view isa_name(Isa isa);

PairSums pair_sums(const DipoleLayer& lower, const DipoleLayer& upper, double dz);
PairSums pair_sums(Isa isa, const DipoleLayer& lower, const DipoleLayer& upper, double dz);

}  // namespace compumat::simd
