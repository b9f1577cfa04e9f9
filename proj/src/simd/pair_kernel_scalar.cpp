#include <cmath>

#include "compumat/simd/pair_kernel.hpp"

namespace compumat::simd {

PairSums pair_sums_scalar(const DipoleLayer& lower, const DipoleLayer& upper, double dz) {
  PairSums s;
  const double dz2 = dz * dz;
  for (std::size_t j = 0; j < upper.x.size(); ++j) {
    const double ux = upper.x[j];
    const double uy = upper.y[j];
    const double uq = upper.q[j];
    for (std::size_t i = 0; i < lower.x.size(); ++i) {
      const double dx = ux - lower.x[i];
      const double dy = uy - lower.y[i];
      const double r2 = dx * dx + dy * dy + dz2;
      if (r2 == 0.0) {
        s.degenerate = true;
        continue;
      }
      const double inv_r2 = 1.0 / r2;
      const double inv_r = 1.0 / std::sqrt(r2);
      const double inv_r3 = inv_r2 * inv_r;
      const double c2 = dz2 * inv_r2;
      const double ab = lower.q[i] * uq;
      const double k = 3.0e-7 * ab * inv_r3 * inv_r2;
      const double lateral = k * (1.0 - 5.0 * c2);
      s.fx += lateral * dx;
      s.fy += lateral * dy;
      s.fz += k * dz * (3.0 - 5.0 * c2);
      s.energy += 1.0e-7 * ab * inv_r3 * (1.0 - 3.0 * c2);
    }
  }
  return s;
}

}  // namespace compumat::simd
