#include "compumat/fab.hpp"

#include <cmath>

#include "compumat/error.hpp"
#include "compumat/text.hpp"

namespace compumat {
namespace {

std::string num(double v) { return text::fixed(v, 4); }

void pair_out(std::string& out, int code, std::string_view value) {
  out += std::to_string(code);
  out += '\n';
  out += value;
  out += '\n';
}

void check_layer(const std::string& layer) {
  if (layer.empty() || layer.find_first_of(" \t\r\n") != std::string::npos)
    throw ValidationError("DXF layer names must be non-empty single words");
}

}  // namespace

std::size_t DxfDocument::count(std::string_view layer) const {
  std::size_t k = 0;
  for (const auto& e : entities) std::visit([&](const auto& x) { k += x.layer == layer; }, e);
  return k;
}

double quantize(double mm) {
  const double q = std::round(mm * 1e4) / 1e4;
  return q == 0.0 ? 0.0 : q;
}

void validate(const DxfDocument& doc) {
  for (const auto& e : doc.entities) {
    if (const auto* p = std::get_if<DxfPolyline>(&e)) {
      check_layer(p->layer);
      if (p->vertices.size() < 3) throw ValidationError("closed polyline needs at least 3 vertices");
      for (const auto& [x, y] : p->vertices)
        if (!std::isfinite(x) || !std::isfinite(y)) throw ValidationError("non-finite DXF coordinate");
    } else {
      const auto& c = std::get<DxfCircle>(e);
      check_layer(c.layer);
      if (!std::isfinite(c.x) || !std::isfinite(c.y) || !(c.radius > 0.0) || !std::isfinite(c.radius))
        throw ValidationError("invalid DXF circle");
    }
  }
}

std::string write_dxf(const DxfDocument& doc) {
  validate(doc);
  std::string out;
  pair_out(out, 0, "SECTION");
  pair_out(out, 2, "HEADER");
  pair_out(out, 9, "$ACADVER");
  pair_out(out, 1, "AC1009");
  pair_out(out, 9, "$INSUNITS");
  pair_out(out, 70, "4");
  pair_out(out, 0, "ENDSEC");
  pair_out(out, 0, "SECTION");
  pair_out(out, 2, "ENTITIES");
  for (const auto& e : doc.entities) {
    if (const auto* p = std::get_if<DxfPolyline>(&e)) {
      pair_out(out, 0, "LWPOLYLINE");
      pair_out(out, 8, p->layer);
      pair_out(out, 90, std::to_string(p->vertices.size()));
      pair_out(out, 70, "1");
      for (const auto& [x, y] : p->vertices) {
        pair_out(out, 10, num(x));
        pair_out(out, 20, num(y));
      }
    } else {
      const auto& c = std::get<DxfCircle>(e);
      pair_out(out, 0, "CIRCLE");
      pair_out(out, 8, c.layer);
      pair_out(out, 10, num(c.x));
      pair_out(out, 20, num(c.y));
      pair_out(out, 40, num(c.radius));
    }
  }
  pair_out(out, 0, "ENDSEC");
  pair_out(out, 0, "EOF");
  return out;
}

namespace {

class GroupReader {
 public:
  explicit GroupReader(std::string_view bytes) : lines_(text::split_lines(bytes)) {}

  bool done() const { return pos_ >= lines_.size(); }
  int line() const { return static_cast<int>(pos_) + 1; }

  std::pair<int, std::string_view> next() {
    if (pos_ + 1 >= lines_.size()) throw ParseError("truncated group", line());
    const auto code = text::parse_int(trim(lines_[pos_]));
    if (!code) throw ParseError("malformed group code '" + std::string(lines_[pos_]) + "'", line());
    const auto value = trim(lines_[pos_ + 1]);
    pos_ += 2;
    return {static_cast<int>(*code), value};
  }

  std::pair<int, std::string_view> peek() {
    const auto save = pos_;
    auto g = next();
    pos_ = save;
    return g;
  }

  void expect(int code, std::string_view value) {
    const int at = line();
    const auto [c, v] = next();
    if (c != code || v != value)
      throw ParseError("expected group " + std::to_string(code) + " '" + std::string(value) + "'", at);
  }

  double number(int code) {
    const int at = line();
    const auto [c, v] = next();
    if (c != code) throw ParseError("expected group code " + std::to_string(code), at);
    const auto d = text::parse_double(v);
    if (!d || !std::isfinite(*d)) throw ParseError("malformed number '" + std::string(v) + "'", at + 1);
    return *d;
  }

 private:
  static std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
  }

  std::vector<std::string_view> lines_;
  std::size_t pos_ = 0;
};

}  // namespace

DxfDocument parse_dxf(std::string_view bytes) {
  GroupReader r(bytes);
  DxfDocument doc;
  bool in_entities = false;
  bool saw_eof = false;
  while (!r.done()) {
    const int at = r.line();
    const auto [code, value] = r.next();
    if (code != 0) throw ParseError("expected entity or section start", at);
    if (value == "EOF") {
      saw_eof = true;
      break;
    }
    if (value == "SECTION") {
      const auto [c2, name] = r.next();
      if (c2 != 2) throw ParseError("section without a name", at + 2);
      in_entities = name == "ENTITIES";
      if (!in_entities) {
        // Skip header variables up to ENDSEC.
        while (true) {
          const auto [c, v] = r.next();
          if (c == 0 && v == "ENDSEC") break;
        }
      }
      continue;
    }
    if (value == "ENDSEC") {
      in_entities = false;
      continue;
    }
    if (!in_entities) throw ParseError("entity outside the ENTITIES section", at);
    if (value == "LWPOLYLINE") {
      DxfPolyline p;
      const auto [c8, layer] = r.next();
      if (c8 != 8) throw ParseError("polyline without a layer", at + 2);
      p.layer = std::string(layer);
      const auto count = r.number(90);
      if (count < 0 || count != std::floor(count)) throw ParseError("bad vertex count", at + 4);
      if (r.number(70) != 1.0) throw ParseError("only closed polylines are supported", at + 6);
      for (int i = 0; i < static_cast<int>(count); ++i) {
        const double x = r.number(10);
        const double y = r.number(20);
        p.vertices.emplace_back(x, y);
      }
      if (!r.done() && r.peek().first != 0) throw ParseError("vertex count does not match the polyline", r.line());
      doc.entities.emplace_back(std::move(p));
    } else if (value == "CIRCLE") {
      DxfCircle c;
      const auto [c8, layer] = r.next();
      if (c8 != 8) throw ParseError("circle without a layer", at + 2);
      c.layer = std::string(layer);
      c.x = r.number(10);
      c.y = r.number(20);
      c.radius = r.number(40);
      doc.entities.emplace_back(std::move(c));
    } else {
      throw ParseError("unsupported entity '" + std::string(value) + "'", at + 1);
    }
  }
  if (!saw_eof) throw ParseError("missing EOF marker", r.line());
  try {
    validate(doc);
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 0);
  }
  return doc;
}

namespace {

DxfPolyline square(std::string layer, double x0, double y0, double side) {
  const double x1 = quantize(x0 + side), y1 = quantize(y0 + side);
  x0 = quantize(x0);
  y0 = quantize(y0);
  return {std::move(layer), {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

}  // namespace

DxfDocument circuit_document(const CircuitNet& circuit, double side_mm) {
  if (!(side_mm > 0.0)) throw ValidationError("side_mm must be positive");
  validate(circuit, side_mm);
  DxfDocument doc;
  doc.entities.emplace_back(square("OUTLINE", -side_mm / 2.0, -side_mm / 2.0, side_mm));
  for (const auto& p : circuit.pads)
    doc.entities.emplace_back(DxfCircle{"TRACE", quantize(p.x_mm), quantize(p.y_mm), quantize(p.radius_mm)});
  for (const auto& p : circuit.pads)
    doc.entities.emplace_back(
        DxfCircle{"CUT", quantize(p.x_mm), quantize(p.y_mm), quantize(p.radius_mm + kIsolationMm)});
  return doc;
}

std::string export_dxf_circuit(const CircuitNet& circuit, double side_mm) {
  return write_dxf(circuit_document(circuit, side_mm));
}

DxfDocument outline_document(double side_mm, int count, double spacing_mm) {
  if (!(side_mm > 0.0) || !std::isfinite(side_mm)) throw ValidationError("outline side must be positive");
  if (count < 1) throw ValidationError("outline count must be >= 1");
  if (!(spacing_mm >= 0.0)) throw ValidationError("outline spacing must be non-negative");
  DxfDocument doc;
  for (int i = 0; i < count; ++i) doc.entities.emplace_back(square("CUT", i * (side_mm + spacing_mm), 0.0, side_mm));
  return doc;
}

std::string export_dxf_outline(double side_mm, int count, double spacing_mm) {
  return write_dxf(outline_document(side_mm, count, spacing_mm));
}

void validate(const PlotterProfile& profile) {
  if (!(profile.feed_rate_mm_min > 0.0)) throw ValidationError("feed rate must be positive");
  if (profile.dwell_ms < 0) throw ValidationError("dwell must be non-negative");
  if (!(profile.z_travel_mm > profile.z_plot_mm)) throw ValidationError("z_travel must be above z_plot");
  for (const auto* cmd : {&profile.energize_north, &profile.energize_south, &profile.de_energize})
    if (cmd->empty() || cmd->find('\n') != std::string::npos)
      throw ValidationError("plotter commands must be single non-empty lines");
}

std::string export_plotter_gcode(const MagnetPixelGrid& grid, const PlotterProfile& profile) {
  validate(profile);
  const int n = grid.n();
  const double p = grid.pitch_mm();
  std::string out;
  out += "; magnetic plot " + std::to_string(n) + "x" + std::to_string(n) + " pitch " + num(p) + " mm\n";
  out += "G21\nG90\n";
  out += "G0 Z" + num(profile.z_travel_mm) + "\n";
  for (int row = 0; row < n; ++row) {
    const bool reverse = profile.serpentine && (row % 2 == 1);
    for (int k = 0; k < n; ++k) {
      const int col = reverse ? n - 1 - k : k;
      const int s = grid.at(row, col);
      if (s == 0) continue;
      out += "G0 X" + num((col + 0.5) * p) + " Y" + num((n - row - 0.5) * p) + "\n";
      out += "G1 Z" + num(profile.z_plot_mm) + " F" + num(profile.feed_rate_mm_min) + "\n";
      out += (s > 0 ? profile.energize_north : profile.energize_south) + "\n";
      out += "G4 P" + std::to_string(profile.dwell_ms) + "\n";
      out += profile.de_energize + "\n";
      out += "G0 Z" + num(profile.z_travel_mm) + "\n";
    }
  }
  out += "G0 X0.0000 Y0.0000\n";
  out += "M2\n";
  return out;
}

}  // namespace compumat
