#pragma once

#include <array>
#include <vector>

#include "compumat/dipole.hpp"
#include "compumat/grid.hpp"
#include "compumat/simd/pair_kernel.hpp"

namespace compumat {

enum class SheetRole { base, mating };

struct LabDipole {
  Vec3 position;  // meters
  Vec3 moment;    // A*m^2
};

/// Places every pixel of `grid` in the lab frame. The base sheet lies in
/// z = 0 with moments s*m along +z. The mating sheet is mirrored (x -> -x)
/// when mated, rotated, translated and lifted to z = gap; mated moments are
/// -s*m along z because its outward normal points down.
std::vector<LabDipole> lab_frame_dipoles(const MagnetPixelGrid& grid, const Pose& pose, SheetRole role,
                                         double gap_mm);
std::vector<LabDipole> lab_frame_dipoles(const MagnetPixelGrid& grid, const SubpixelPose& pose, SheetRole role,
                                         double gap_mm);

/// Total interaction on the mating sheet. normal_force_n > 0 pulls the sheets together.
struct InteractionResult {
  double normal_force_n = 0.0;
  std::array<double, 2> shear_force_n{0.0, 0.0};
  double energy_j = 0.0;
};

/// O(N^2) reference over all pixel pairs. Throws DegenerateGeometryError when gap_mm <= 0.
InteractionResult pairwise_interaction(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& pose,
                                       double gap_mm);
InteractionResult subpixel_interaction(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const SubpixelPose& pose,
                                       double gap_mm);
/// Same sum through an explicit kernel variant (equivalence tests).
InteractionResult subpixel_interaction(simd::Isa isa, const MagnetPixelGrid& a, const MagnetPixelGrid& b,
                                       const SubpixelPose& pose, double gap_mm);

/// Normal force over every lattice translation in [-(n-1), n-1]^2 and all
/// four quarter turns.
class InteractionMap {
 public:
  InteractionMap(int n, double gap_mm, bool mated);

  int n() const noexcept { return n_; }
  int span() const noexcept { return 2 * n_ - 1; }
  double gap_mm() const noexcept { return gap_mm_; }
  bool mated() const noexcept { return mated_; }

  double at(int rot, int dx, int dy) const { return slices_[static_cast<std::size_t>(rot)][index(dx, dy)]; }
  double& at(int rot, int dx, int dy) { return slices_[static_cast<std::size_t>(rot)][index(dx, dy)]; }
  double at(const Pose& p) const { return at(p.rot_quarter, p.dx_px, p.dy_px); }
  /// Row-major over dy (outer) then dx, both from -(n-1).
  const std::vector<double>& slice(int rot) const { return slices_[static_cast<std::size_t>(rot)]; }
  std::vector<double>& slice(int rot) { return slices_[static_cast<std::size_t>(rot)]; }

 private:
  std::size_t index(int dx, int dy) const {
    return static_cast<std::size_t>((dy + n_ - 1) * span() + (dx + n_ - 1));
  }
  int n_;
  double gap_mm_;
  bool mated_;
  std::array<std::vector<double>, 4> slices_;
};

/// FFT cross-correlation sweep. Grids must share pitch; the smaller one is
/// zero-padded to the larger side.
InteractionMap pose_sweep(const MagnetPixelGrid& a, const MagnetPixelGrid& b, double gap_mm, bool mated = true);

/// Normal force at `pose` with both sheets rescaled to each thickness.
std::vector<double> thickness_sweep(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& pose,
                                    double gap_mm, const std::vector<double>& thicknesses_mm);

/// Normal force between two unit-polarity pixels at lateral lattice offset
/// (du, dv) pixels; moments, gap and mating sign folded in.
double pair_kernel_value(int du, int dv, double pitch_mm, double gap_mm, double moment_a, double moment_b,
                         bool mated);

}  // namespace compumat
