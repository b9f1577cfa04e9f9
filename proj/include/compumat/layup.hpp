#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "compumat/grid.hpp"

namespace compumat {

enum class LayerKind { structural, magnetic, circuit, battery, aesthetic };

std::string_view to_string(LayerKind kind);
LayerKind parse_layer_kind(std::string_view s);

struct Layer {
  LayerKind kind = LayerKind::structural;
  double thickness_mm = 0.0;
  std::string label;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Copper pad, center in the sheet frame (origin at the sheet center, mm).
struct Pad {
  std::string id;
  double x_mm = 0.0;
  double y_mm = 0.0;
  double radius_mm = 0.0;
  std::string net;
  bool exposed = true;

  friend bool operator==(const Pad&, const Pad&) = default;
};

enum class ComponentKind { led, resistor, mcu, battery };

std::string_view to_string(ComponentKind kind);
ComponentKind parse_component_kind(std::string_view s);

struct Component {
  std::string id;
  ComponentKind kind = ComponentKind::led;
  std::vector<std::string> nets;

  friend bool operator==(const Component&, const Component&) = default;
};

inline constexpr double kBatteryNominalVolts = 3.6;

struct CircuitNet {
  std::vector<Pad> pads;
  std::vector<Component> components;
  std::string source_net;
  std::string sink_net;
  std::vector<std::string> required_nets;
  /// Same-sheet net pairs that are meant to join through a mate (a seam that
  /// routes one net onto another). Pairs chain into groups; any other
  /// same-sheet merge is a short.
  std::vector<std::pair<std::string, std::string>> allowed_merges;

  bool has_battery() const;
  double min_pad_radius() const;
  const Pad* find_pad(std::string_view id) const;

  friend bool operator==(const CircuitNet&, const CircuitNet&) = default;
};

/// Pad ids and component ids unique, radii positive, pads fully inside the
/// sheet square, source != sink.
void validate(const CircuitNet& circuit, double side_mm);

struct CompositeSheet {
  std::vector<Layer> layers;
  MagnetPixelGrid magnetic_grid;
  std::optional<CircuitNet> circuit;
  double side_mm = 50.0;
};

void validate(const CompositeSheet& sheet);

double stack_thickness(std::span<const Layer> layers);
double stack_thickness(const CompositeSheet& sheet);

/// Full electronic sheet: structural, magnetic, circuit, battery, aesthetic; 3.0 mm in total.
std::vector<Layer> default_layup();

struct Contact {
  std::string pad_a;
  std::string pad_b;

  friend bool operator==(const Contact&, const Contact&) = default;
  friend auto operator<=>(const Contact&, const Contact&) = default;
};

/// Pad transform shared with the dipole placement: mirror x when mated,
/// rotate CCW by quarter turns, translate by the pose offset in pitches.
std::pair<double, double> place_point(double x_mm, double y_mm, const Pose& pose, double pitch_mm);

/// Exposed pads of `a` (in place) against exposed pads of `b` (placed by
/// `pose`) whose centers lie within `tol_mm`. Ordered by pad index in a, then b.
std::vector<Contact> contacts_between(const CircuitNet& a, const CircuitNet& b, const Pose& pose, double pitch_mm,
                                      double tol_mm);

/// Tolerance defaults to the smallest pad radius of either circuit.
std::vector<Contact> mate_contacts(const CompositeSheet& a, const CompositeSheet& b, const Pose& pose,
                                   std::optional<double> tol_mm = std::nullopt);

/// One circuit taking part in a continuity check, with the prefix used to
/// qualify its net and component names ("A" gives "A:VBAT").
struct LabeledCircuit {
  std::string label;
  const CircuitNet* circuit = nullptr;
};

/// Contact between pad `pad_a` of circuit `circuit_a` and pad `pad_b` of
/// circuit `circuit_b` (the two may be the same circuit).
struct PadContact {
  std::size_t circuit_a = 0;
  std::string pad_a;
  std::size_t circuit_b = 0;
  std::string pad_b;
};

struct ContinuityResult {
  /// Qualified names of nets lying on a simple supply-to-return path.
  std::set<std::string> closed_nets;
  /// Qualified ids of non-battery components on such a path.
  std::set<std::string> powered_components;
  bool shorted = false;
  std::vector<std::pair<std::string, std::string>> shorted_nets;
  /// Classes of qualified net names, each sorted, classes sorted.
  std::vector<std::vector<std::string>> partition;
};

ContinuityResult circuit_continuity(std::span<const LabeledCircuit> circuits, std::span<const PadContact> contacts);

/// Two-sheet form; nets are qualified "A:" and "B:".
ContinuityResult circuit_continuity(const CompositeSheet& a, const CompositeSheet& b,
                                    std::span<const Contact> contacts);

struct MatingCheckResult {
  bool bonded = false;
  double bond_force_n = 0.0;
  std::vector<Contact> contacts;
  std::set<std::string> closed_nets;
  std::vector<std::string> open_required_nets;
  bool shorted = false;
  std::vector<std::pair<std::string, std::string>> shorted_nets;
  bool authenticated = false;
};

MatingCheckResult double_authenticate(const CompositeSheet& a, const CompositeSheet& b, const Pose& pose,
                                      double gap_mm, double f_min_n, std::optional<double> tol_mm = std::nullopt);

}  // namespace compumat
