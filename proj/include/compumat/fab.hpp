#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "compumat/grid.hpp"
#include "compumat/layup.hpp"

namespace compumat {

struct DxfPolyline {
  std::string layer;
  std::vector<std::pair<double, double>> vertices;  // implicitly closed

  friend bool operator==(const DxfPolyline&, const DxfPolyline&) = default;
};

struct DxfCircle {
  std::string layer;
  double x = 0.0;
  double y = 0.0;
  double radius = 0.0;

  friend bool operator==(const DxfCircle&, const DxfCircle&) = default;
};

using DxfEntity = std::variant<DxfPolyline, DxfCircle>;

/// Millimeter units throughout.
struct DxfDocument {
  std::vector<DxfEntity> entities;

  std::size_t count(std::string_view layer) const;
  friend bool operator==(const DxfDocument&, const DxfDocument&) = default;
};

/// Emitted coordinates carry 4 decimals; quantize() gives the value a reader will see.
double quantize(double mm);

/// Clearance between a pad and its isolation cut.
inline constexpr double kIsolationMm = 0.3;

void validate(const DxfDocument& doc);
std::string write_dxf(const DxfDocument& doc);
/// Reads the subset write_dxf emits. Malformed group codes raise ParseError.
DxfDocument parse_dxf(std::string_view bytes);

/// Sheet square on OUTLINE, each pad as a TRACE circle, each isolation ring on CUT.
/// Coordinates are sheet-centered and already quantized.
DxfDocument circuit_document(const CircuitNet& circuit, double side_mm);
std::string export_dxf_circuit(const CircuitNet& circuit, double side_mm);

/// `count` squares on CUT in a row, the i-th with its lower-left corner at (i * (side + spacing), 0).
DxfDocument outline_document(double side_mm, int count, double spacing_mm);
std::string export_dxf_outline(double side_mm, int count, double spacing_mm);

struct PlotterProfile {
  double feed_rate_mm_min = 600.0;
  int dwell_ms = 250;
  double z_plot_mm = 0.0;
  double z_travel_mm = 5.0;
  std::string energize_north = "M3";
  std::string energize_south = "M4";
  std::string de_energize = "M5";
  bool serpentine = false;
};

void validate(const PlotterProfile& profile);

/// Pixel (row, col) is plotted at ((col + 0.5) * pitch, (n - row - 0.5) * pitch)
/// with the sheet's lower-left corner at the machine origin.
std::string export_plotter_gcode(const MagnetPixelGrid& grid, const PlotterProfile& profile = {});

}  // namespace compumat
