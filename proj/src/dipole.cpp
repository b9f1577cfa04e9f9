#include "compumat/dipole.hpp"

#include "compumat/error.hpp"

namespace compumat {

Vec3 dipole_dipole_force(const Vec3& m1, const Vec3& m2, const Vec3& r) {
  const double len = norm(r);
  if (!(len > 0.0)) throw DegenerateGeometryError("dipoles coincide");
  const Vec3 u = (1.0 / len) * r;
  const double a = dot(m1, u);
  const double b = dot(m2, u);
  const double c = 3.0 * kMu0Over4Pi / (len * len * len * len);
  Vec3 f = a * m2 + b * m1 + dot(m1, m2) * u;
  f -= (5.0 * a * b) * u;
  return c * f;
}

double dipole_dipole_energy(const Vec3& m1, const Vec3& m2, const Vec3& r) {
  const double len = norm(r);
  if (!(len > 0.0)) throw DegenerateGeometryError("dipoles coincide");
  const Vec3 u = (1.0 / len) * r;
  return kMu0Over4Pi / (len * len * len) * (dot(m1, m2) - 3.0 * dot(m1, u) * dot(m2, u));
}

}  // namespace compumat
