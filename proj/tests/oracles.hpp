#pragma once

// Test-only reference computations. Nothing here calls into the library's
// physics; each oracle is coded from the textbook formulas directly.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "compumat/grid.hpp"

namespace oracle {

inline double rel_err(double got, double want) {
  const double scale = std::abs(want);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

/// Relative error with a floor: exact zeros arise by symmetry (e.g. a pattern
/// rotated onto itself), and there only the absolute error against the
/// floor is meaningful.
inline double rel_err_floored(double got, double want, double floor) {
  const double scale = std::max(std::abs(want), floor);
  return scale == 0.0 ? std::abs(got) : std::abs(got - want) / scale;
}

struct Dip {
  double x, y, z, mz;
};

/// Coordinates of every pixel as an explicit triple loop over rows, columns and
/// quarter turns, written without the library's doubled-coordinate helpers.
inline std::vector<Dip> place(const compumat::MagnetPixelGrid& g, double dx_mm, double dy_mm, double theta_deg,
                              bool mated, bool upper, double gap_mm) {
  std::vector<Dip> out;
  const double c = (g.n() - 1) / 2.0;
  const double p = g.pitch_mm();
  const double th = theta_deg * M_PI / 180.0;
  const double m = g.magnetization_a_per_m() * std::pow(p / 1000.0, 2) * (g.thickness_mm() / 1000.0);
  for (int row = 0; row < g.n(); ++row)
    for (int col = 0; col < g.n(); ++col) {
      const int s = g.at(row, col);
      if (s == 0) continue;
      double x = (col - c) * p;
      double y = (c - row) * p;
      if (!upper) {
        out.push_back({x / 1000.0, y / 1000.0, 0.0, s * m});
        continue;
      }
      if (mated) x = -x;
      // Snap exact quarter turns so lattice positions stay exact.
      double ct = std::cos(th), st = std::sin(th);
      const double q = theta_deg / 90.0;
      if (q == std::round(q)) {
        const int k = ((static_cast<int>(q) % 4) + 4) % 4;
        const int cs[4] = {1, 0, -1, 0};
        const int sn[4] = {0, 1, 0, -1};
        ct = cs[k];
        st = sn[k];
      }
      const double rx = ct * x - st * y + dx_mm;
      const double ry = st * x + ct * y + dy_mm;
      out.push_back({rx / 1000.0, ry / 1000.0, gap_mm / 1000.0, (mated ? -s : s) * m});
    }
  return out;
}

/// Brute-force total force (x, y, z) and energy on the upper sheet, general
/// vector dipole formula, pairs visited in plain nested order.
inline std::array<double, 4> brute_force(const std::vector<Dip>& lower, const std::vector<Dip>& upper) {
  long double fx = 0, fy = 0, fz = 0, en = 0;
  for (const auto& u : upper)
    for (const auto& l : lower) {
      const long double rx = u.x - l.x, ry = u.y - l.y, rz = u.z - l.z;
      const long double r = std::sqrt(rx * rx + ry * ry + rz * rz);
      const long double ex = rx / r, ey = ry / r, ez = rz / r;
      const long double m1r = l.mz * ez, m2r = u.mz * ez, m12 = static_cast<long double>(l.mz) * u.mz;
      const long double pre = 3.0e-7L / (r * r * r * r);
      fx += pre * (m12 * ex - 5 * m1r * m2r * ex);
      fy += pre * (m12 * ey - 5 * m1r * m2r * ey);
      fz += pre * (m1r * u.mz + m2r * l.mz + m12 * ez - 5 * m1r * m2r * ez);
      en += 1.0e-7L / (r * r * r) * (m12 - 3 * m1r * m2r);
    }
  return {static_cast<double>(fx), static_cast<double>(fy), static_cast<double>(fz), static_cast<double>(en)};
}

/// Normal force (attraction positive) of B over A at a lattice or continuous pose.
inline double normal_force(const compumat::MagnetPixelGrid& a, const compumat::MagnetPixelGrid& b, double dx_mm,
                           double dy_mm, double theta_deg, bool mated, double gap_mm) {
  const auto lower = place(a, 0, 0, 0, mated, false, gap_mm);
  const auto upper = place(b, dx_mm, dy_mm, theta_deg, mated, true, gap_mm);
  return -brute_force(lower, upper)[2];
}

inline compumat::MagnetPixelGrid random_grid(std::mt19937_64& rng, int n, bool allow_zero = true,
                                             compumat::Material mat = {}) {
  std::vector<std::int8_t> p(static_cast<std::size_t>(n * n));
  for (auto& s : p) {
    const auto v = rng() % (allow_zero ? 3 : 2);
    s = static_cast<std::int8_t>(v == 0 ? 1 : (v == 1 ? -1 : 0));
  }
  return compumat::MagnetPixelGrid(n, mat, std::move(p));
}

}  // namespace oracle
