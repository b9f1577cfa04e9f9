#include "compumat/magnetics.hpp"

#include <cmath>

#include "compumat/error.hpp"

namespace compumat {
namespace {

struct PlanarTransform {
  bool mated = true;
  int quarter = -1;  // >= 0 when the angle is an exact quarter turn
  double cos_t = 1.0;
  double sin_t = 0.0;
  double dx_mm = 0.0;
  double dy_mm = 0.0;
};

PlanarTransform make_transform(const SubpixelPose& pose) {
  if (!std::isfinite(pose.dx_mm) || !std::isfinite(pose.dy_mm) || !std::isfinite(pose.theta_deg))
    throw ValidationError("subpixel pose must be finite");
  PlanarTransform t;
  t.mated = pose.mated;
  t.dx_mm = pose.dx_mm;
  t.dy_mm = pose.dy_mm;
  double theta = std::fmod(pose.theta_deg, 360.0);
  if (theta < 0.0) theta += 360.0;
  if (std::fmod(theta, 90.0) == 0.0) {
    t.quarter = static_cast<int>(theta / 90.0) % 4;
  } else {
    const double rad = theta * (3.14159265358979323846 / 180.0);
    t.cos_t = std::cos(rad);
    t.sin_t = std::sin(rad);
  }
  return t;
}

// Local pixel center (mm) -> lab plane (mm) for the mating sheet.
void place(const PlanarTransform& t, double x, double y, double& out_x, double& out_y) {
  if (t.mated) x = -x;
  if (t.quarter >= 0) {
    for (int k = 0; k < t.quarter; ++k) {
      const double nx = -y;
      y = x;
      x = nx;
    }
  } else {
    const double nx = t.cos_t * x - t.sin_t * y;
    const double ny = t.sin_t * x + t.cos_t * y;
    x = nx;
    y = ny;
  }
  out_x = x + t.dx_mm;
  out_y = y + t.dy_mm;
}

struct Columns {
  std::vector<double> x, y, q;
  simd::DipoleLayer layer() const { return {x, y, q}; }
};

Columns base_columns(const MagnetPixelGrid& g) {
  Columns c;
  const double m = g.moment();
  for (int r = 0; r < g.n(); ++r)
    for (int col = 0; col < g.n(); ++col) {
      const auto s = g.at(r, col);
      if (s == 0) continue;
      const auto d = doubled_local(g.n(), r, col);
      c.x.push_back(0.5 * d.x2 * g.pitch_mm() / 1000.0);
      c.y.push_back(0.5 * d.y2 * g.pitch_mm() / 1000.0);
      c.q.push_back(s * m);
    }
  return c;
}

Columns mating_columns(const MagnetPixelGrid& g, const PlanarTransform& t) {
  Columns c;
  const double m = g.moment();
  for (int r = 0; r < g.n(); ++r)
    for (int col = 0; col < g.n(); ++col) {
      const auto s = g.at(r, col);
      if (s == 0) continue;
      const auto d = doubled_local(g.n(), r, col);
      double x = 0.0, y = 0.0;
      place(t, 0.5 * d.x2 * g.pitch_mm(), 0.5 * d.y2 * g.pitch_mm(), x, y);
      c.x.push_back(x / 1000.0);
      c.y.push_back(y / 1000.0);
      c.q.push_back((t.mated ? -s : s) * m);
    }
  return c;
}

void check_gap(double gap_mm) {
  if (!(gap_mm > 0.0) || !std::isfinite(gap_mm))
    throw DegenerateGeometryError("gap_mm must be positive: sheets at zero gap put dipoles on top of each other");
}

}  // namespace

std::vector<LabDipole> lab_frame_dipoles(const MagnetPixelGrid& grid, const SubpixelPose& pose, SheetRole role,
                                         double gap_mm) {
  std::vector<LabDipole> out;
  out.reserve(static_cast<std::size_t>(grid.n() * grid.n()));
  const double m = grid.moment();
  const PlanarTransform t = make_transform(pose);
  for (int r = 0; r < grid.n(); ++r)
    for (int col = 0; col < grid.n(); ++col) {
      const auto s = grid.at(r, col);
      const auto d = doubled_local(grid.n(), r, col);
      const double lx = 0.5 * d.x2 * grid.pitch_mm();
      const double ly = 0.5 * d.y2 * grid.pitch_mm();
      if (role == SheetRole::base) {
        out.push_back({{lx / 1000.0, ly / 1000.0, 0.0}, {0.0, 0.0, s * m}});
      } else {
        double x = 0.0, y = 0.0;
        place(t, lx, ly, x, y);
        const double q = (pose.mated ? -s : s) * m;
        out.push_back({{x / 1000.0, y / 1000.0, gap_mm / 1000.0}, {0.0, 0.0, q}});
      }
    }
  return out;
}

std::vector<LabDipole> lab_frame_dipoles(const MagnetPixelGrid& grid, const Pose& pose, SheetRole role,
                                         double gap_mm) {
  return lab_frame_dipoles(grid, to_subpixel(pose, grid.pitch_mm()), role, gap_mm);
}

InteractionResult subpixel_interaction(simd::Isa isa, const MagnetPixelGrid& a, const MagnetPixelGrid& b,
                                       const SubpixelPose& pose, double gap_mm) {
  check_gap(gap_mm);
  const Columns lower = base_columns(a);
  const Columns upper = mating_columns(b, make_transform(pose));
  const auto sums = simd::pair_sums(isa, lower.layer(), upper.layer(), gap_mm / 1000.0);
  if (sums.degenerate) throw DegenerateGeometryError("overlapping dipole positions");
  InteractionResult r;
  r.normal_force_n = -sums.fz;
  r.shear_force_n = {sums.fx, sums.fy};
  r.energy_j = sums.energy;
  return r;
}

InteractionResult subpixel_interaction(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const SubpixelPose& pose,
                                       double gap_mm) {
  return subpixel_interaction(simd::active_isa(), a, b, pose, gap_mm);
}

InteractionResult pairwise_interaction(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& pose,
                                       double gap_mm) {
  validate(pose);
  if (a.pitch_mm() != b.pitch_mm()) throw ValidationError("lattice poses need grids with equal pitch");
  return subpixel_interaction(a, b, to_subpixel(pose, b.pitch_mm()), gap_mm);
}

InteractionMap::InteractionMap(int n, double gap_mm, bool mated) : n_(n), gap_mm_(gap_mm), mated_(mated) {
  for (auto& s : slices_) s.assign(static_cast<std::size_t>(span() * span()), 0.0);
}

std::vector<double> thickness_sweep(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& pose,
                                    double gap_mm, const std::vector<double>& thicknesses_mm) {
  for (double t : thicknesses_mm)
    if (!(t > 0.0) || !std::isfinite(t)) throw ValidationError("thickness must be positive");
  std::vector<double> out;
  out.reserve(thicknesses_mm.size());
  for (double t : thicknesses_mm)
    out.push_back(pairwise_interaction(a.with_thickness(t), b.with_thickness(t), pose, gap_mm).normal_force_n);
  return out;
}

double pair_kernel_value(int du, int dv, double pitch_mm, double gap_mm, double moment_a, double moment_b,
                         bool mated) {
  const Vec3 r{du * pitch_mm / 1000.0, dv * pitch_mm / 1000.0, gap_mm / 1000.0};
  const Vec3 m1{0.0, 0.0, moment_a};
  const Vec3 m2{0.0, 0.0, mated ? -moment_b : moment_b};
  return -dipole_dipole_force(m1, m2, r).z;
}

}  // namespace compumat
