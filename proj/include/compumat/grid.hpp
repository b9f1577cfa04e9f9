#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace compumat {

/// Sheet material constants. Geometry is in millimeters at every interface.
struct Material {
  double pitch_mm = 2.0;
  double thickness_mm = 0.76;
  double magnetization_a_per_m = 1.0e5;

  friend bool operator==(const Material&, const Material&) = default;
};

/// Square lattice of magnetic pixels. Polarity is the sign of the
/// magnetization along the sheet's local outward normal; 0 is unmagnetized.
///
/// Pixel (row, col) sits at local ((col - c) * pitch, (c - row) * pitch) with
/// c = (n - 1) / 2, so row 0 is the top row.
class MagnetPixelGrid {
 public:
  MagnetPixelGrid(int n, const Material& material, std::vector<std::int8_t> polarity);

  static MagnetPixelGrid zeros(int n, const Material& material = {});
  static MagnetPixelGrid filled(int n, std::int8_t value, const Material& material = {});

  int n() const noexcept { return n_; }
  const Material& material() const noexcept { return material_; }
  double pitch_mm() const noexcept { return material_.pitch_mm; }
  double thickness_mm() const noexcept { return material_.thickness_mm; }
  double magnetization_a_per_m() const noexcept { return material_.magnetization_a_per_m; }

  /// Per-pixel dipole moment magnitude in A*m^2.
  double moment() const noexcept;

  std::int8_t at(int row, int col) const { return polarity_[static_cast<std::size_t>(row * n_ + col)]; }
  std::span<const std::int8_t> polarity() const noexcept { return polarity_; }
  int nonzero_count() const noexcept;
  bool all_zero() const noexcept { return nonzero_count() == 0; }

  MagnetPixelGrid with_thickness(double thickness_mm) const;
  MagnetPixelGrid with_polarity(std::vector<std::int8_t> polarity) const;
  MagnetPixelGrid negated() const;
  /// Counter-clockwise quarter turns about the grid center.
  MagnetPixelGrid rotated(int quarter_turns) const;
  /// Mirror about the local y axis (x -> -x): column reversal.
  MagnetPixelGrid mirrored() const;
  /// Zero-pad to side `n` keeping pixel (0, 0) in place.
  MagnetPixelGrid padded_to(int n) const;

  friend bool operator==(const MagnetPixelGrid&, const MagnetPixelGrid&) = default;

 private:
  int n_;
  Material material_;
  std::vector<std::int8_t> polarity_;
};

/// Sum over pixels of sA * sB with both arrays aligned (zero lag).
long zero_lag_correlation(const MagnetPixelGrid& a, const MagnetPixelGrid& b);

/// Relative placement of the mating sheet over the base sheet on the pixel lattice.
struct Pose {
  int dx_px = 0;
  int dy_px = 0;
  int rot_quarter = 0;
  bool mated = true;

  friend bool operator==(const Pose&, const Pose&) = default;
};

/// Throws ValidationError unless rot_quarter is in {0, 1, 2, 3}.
void validate(const Pose& pose);

/// The pose that places A over B so that the pair's geometry is the same as
/// B over A at `pose`. Only defined for mated poses.
Pose inverse_pose(const Pose& pose);

std::string to_string(const Pose& pose);

/// Continuous placement used by dense verification sweeps.
struct SubpixelPose {
  double dx_mm = 0.0;
  double dy_mm = 0.0;
  double theta_deg = 0.0;
  bool mated = true;
};

SubpixelPose to_subpixel(const Pose& pose, double pitch_mm);

/// Doubled local coordinates of a pixel center in pixel units; integers for
/// every n, so lattice transforms stay exact.
struct DoubledCoord {
  int x2;
  int y2;
};
DoubledCoord doubled_local(int n, int row, int col);

/// Mirror (when mated) then rotate a doubled local coordinate.
DoubledCoord place_doubled(DoubledCoord c, int rot_quarter, bool mated);

// MAGGRID text interchange format:
//   MAGGRID <n> <pitch_mm> <thickness_mm> <magnetization>
//   n lines of n characters from {+,-,0}
std::string write_maggrid(const MagnetPixelGrid& grid);
MagnetPixelGrid parse_maggrid(std::string_view text);
MagnetPixelGrid read_maggrid_file(const std::string& path);
void write_maggrid_file(const std::string& path, const MagnetPixelGrid& grid);

}  // namespace compumat
