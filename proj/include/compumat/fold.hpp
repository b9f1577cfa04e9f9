#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compumat/error.hpp"
#include "compumat/grid.hpp"
#include "compumat/layup.hpp"

namespace compumat {

enum class Side { front, back };

std::string_view to_string(Side side);

/// One side of a face: an optional magnet grid and pads, both in that side's
/// viewing frame (origin at the face center, x to the right as seen from that
/// side, so the back frame is the front frame mirrored in x).
struct FaceSurface {
  std::optional<MagnetPixelGrid> grid;
  std::vector<Pad> pads;
};

/// Unit square occupying [x, x+1] x [y, y+1] of the net plane; its front looks along +z.
struct Face {
  std::string id;
  int x = 0;
  int y = 0;
  FaceSurface front;
  FaceSurface back;

  const FaceSurface& surface(Side s) const { return s == Side::front ? front : back; }
  FaceSurface& surface(Side s) { return s == Side::front ? front : back; }
};

/// Hinge along the edge shared by two net-adjacent faces. +90 turns the
/// faces front to front, -90 back to back.
struct Crease {
  std::string face_a;
  std::string face_b;
};

struct IntendedConfig {
  std::vector<int> angles;  // per crease, +90 or -90
  std::string label;
  std::vector<std::string> closed_nets;
};

inline constexpr int kMaxCreases = 12;

struct FoldNet {
  double face_mm = 20.0;
  std::vector<Face> faces;
  std::vector<Crease> creases;
  /// Components, supply nets, required nets and allowed merges. Pads live on
  /// the face surfaces; ids are unique across the whole net.
  CircuitNet wiring;
  std::vector<IntendedConfig> intended;

  std::size_t face_index(std::string_view id) const;
};

void validate(const FoldNet& net);

using Vec3i = std::array<int, 3>;
using Mat3i = std::array<int, 9>;  // row-major

/// Maps doubled net-plane coordinates (2x, 2y, 0) to doubled 3D coordinates.
struct FacePlacement {
  Mat3i rot{1, 0, 0, 0, 1, 0, 0, 0, 1};
  Vec3i shift{0, 0, 0};

  Vec3i apply(const Vec3i& p) const;
  Vec3i normal() const { return {rot[2], rot[5], rot[8]}; }
  friend bool operator==(const FacePlacement&, const FacePlacement&) = default;
};

struct SurfaceRef {
  std::size_t face = 0;
  Side side = Side::front;
  friend bool operator==(const SurfaceRef&, const SurfaceRef&) = default;
  friend auto operator<=>(const SurfaceRef&, const SurfaceRef&) = default;
};

/// Two surfaces facing each other. `pose` places q's grid and pads over p's
/// under the two-sheet convention once the pair is closed flat about the
/// shared edge (always mated, zero translation).
struct TouchingPair {
  SurfaceRef p;
  SurfaceRef q;
  Pose pose;
  bool coincident = false;  // the two faces share a cell wall rather than an edge

  friend bool operator==(const TouchingPair&, const TouchingPair&) = default;
};

struct FoldedConfiguration {
  std::uint32_t code = 0;  // bit i set: crease i at -90
  std::vector<int> angles;
  std::size_t root = 0;
  std::vector<FacePlacement> placements;
  std::vector<TouchingPair> touching_pairs;
  bool valid = false;
  std::string invalid_reason;
};

std::vector<int> angles_from_code(std::uint32_t code, std::size_t creases);

/// Folds one assignment (validity included).
FoldedConfiguration fold_configuration(const FoldNet& net, std::span<const int> angles, std::size_t root = 0);

/// Every assignment in code order; only valid configurations are returned.
/// More than kMaxCreases creases raises BudgetError.
std::vector<FoldedConfiguration> enumerate_fold_configs(const FoldNet& net, std::size_t root = 0);

/// Normal force between two touching surfaces, p as the base sheet.
double touching_force(const FoldNet& net, const TouchingPair& pair, double gap_mm);

struct ConfigBonding {
  std::uint32_t code = 0;
  std::vector<int> angles;
  bool bonds = false;
  std::optional<std::size_t> intended;
  std::optional<Side> bonding_side;
  /// Per side: weakest seat over the side's gridded surfaces (0 when unseated);
  /// absent when the side has no grids.
  std::array<std::optional<double>, 2> weakest_seat_n;
  std::vector<double> pair_forces_n;  // aligned with touching_pairs
};

struct UniqueBondingReport {
  std::vector<ConfigBonding> configs;  // valid configurations, code order
  std::size_t bonding_count = 0;
  bool pass = false;
  std::string reason;
};

/// A configuration bonds when some side carries grids and every grid on that
/// side faces a grid it attracts with at least f_min_n. Pass requires the
/// bonding set to equal the intended set, and every other configuration to
/// have, on each gridded side, a surface seated below f_min_n / tau.
UniqueBondingReport check_unique_bonding(const FoldNet& net, double gap_mm, double f_min_n, double tau);

struct FoldCircuitCheck {
  std::set<std::string> closed_nets;  // required nets only
  bool shorted = false;
};

/// Pad contacts across every touching pair, then continuity over the whole sheet.
FoldCircuitCheck confirm_configuration_leds(const FoldNet& net, const FoldedConfiguration& config);

class AmbiguityError : public Error {
 public:
  explicit AmbiguityError(const std::string& what) : Error(ErrorKind::check_failed, what) {}
};

/// The six faces of `config` must close a unit cube. The reader sits as the
/// base sheet over each outward surface grid at the identity mated pose.
std::optional<std::string> classify_cube(const FoldNet& net, const FoldedConfiguration& config,
                                         const MagnetPixelGrid& reader, double f_min_n, double gap_mm = 0.5);

struct FoldedCube {
  const FoldNet* net = nullptr;
  const FoldedConfiguration* config = nullptr;
};

/// Index of the single cube any of whose outward faces the reader matches.
std::optional<std::size_t> classify_among(std::span<const FoldedCube> cubes, const MagnetPixelGrid& reader,
                                          double f_min_n, double gap_mm = 0.5);

}  // namespace compumat
