#pragma once

#include <cmath>

namespace compumat {

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend Vec3 operator-(const Vec3& v) { return {-v.x, -v.y, -v.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// mu_0 / (4 pi) in T*m/A.
inline constexpr double kMu0Over4Pi = 1.0e-7;
inline constexpr double kMu0 = 4.0 * 3.14159265358979323846 * 1.0e-7;

/// Force on dipole `m2` exerted by dipole `m1`, with `r` pointing from m1 to
/// m2 (meters, A*m^2, newtons). Throws DegenerateGeometryError when r = 0.
Vec3 dipole_dipole_force(const Vec3& m1, const Vec3& m2, const Vec3& r);

/// Interaction energy of the same pair, joules.
double dipole_dipole_energy(const Vec3& m1, const Vec3& m2, const Vec3& r);

}  // namespace compumat
