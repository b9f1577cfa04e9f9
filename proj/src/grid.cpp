#include "compumat/grid.hpp"

#include <algorithm>
#include <cmath>

#include "compumat/error.hpp"
#include "compumat/text.hpp"

namespace compumat {
namespace {

void validate_material(const Material& m) {
  if (!(m.pitch_mm > 0.0) || !std::isfinite(m.pitch_mm)) throw ValidationError("pitch_mm must be positive");
  if (!(m.thickness_mm > 0.0) || !std::isfinite(m.thickness_mm))
    throw ValidationError("thickness_mm must be positive");
  if (!(m.magnetization_a_per_m > 0.0) || !std::isfinite(m.magnetization_a_per_m))
    throw ValidationError("magnetization must be positive");
}

int from_doubled(int v2, int n) { return (v2 + (n - 1)) / 2; }

}  // namespace

MagnetPixelGrid::MagnetPixelGrid(int n, const Material& material, std::vector<std::int8_t> polarity)
    : n_(n), material_(material), polarity_(std::move(polarity)) {
  if (n < 1) throw ValidationError("grid side n must be >= 1");
  validate_material(material_);
  if (polarity_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
    throw ValidationError("polarity array must hold n*n entries");
  for (auto s : polarity_)
    if (s != 1 && s != -1 && s != 0) throw ValidationError("polarity entries must be +1, -1 or 0");
}

MagnetPixelGrid MagnetPixelGrid::zeros(int n, const Material& material) { return filled(n, 0, material); }

MagnetPixelGrid MagnetPixelGrid::filled(int n, std::int8_t value, const Material& material) {
  if (n < 1) throw ValidationError("grid side n must be >= 1");
  return MagnetPixelGrid(n, material, std::vector<std::int8_t>(static_cast<std::size_t>(n * n), value));
}

double MagnetPixelGrid::moment() const noexcept {
  const double pitch_m = material_.pitch_mm / 1000.0;
  return material_.magnetization_a_per_m * (pitch_m * pitch_m) * (material_.thickness_mm / 1000.0);
}

int MagnetPixelGrid::nonzero_count() const noexcept {
  return static_cast<int>(std::count_if(polarity_.begin(), polarity_.end(), [](auto s) { return s != 0; }));
}

MagnetPixelGrid MagnetPixelGrid::with_thickness(double thickness_mm) const {
  Material m = material_;
  m.thickness_mm = thickness_mm;
  return MagnetPixelGrid(n_, m, polarity_);
}

MagnetPixelGrid MagnetPixelGrid::with_polarity(std::vector<std::int8_t> polarity) const {
  return MagnetPixelGrid(n_, material_, std::move(polarity));
}

MagnetPixelGrid MagnetPixelGrid::negated() const {
  auto p = polarity_;
  for (auto& s : p) s = static_cast<std::int8_t>(-s);
  return MagnetPixelGrid(n_, material_, std::move(p));
}

MagnetPixelGrid MagnetPixelGrid::rotated(int quarter_turns) const {
  const int k = ((quarter_turns % 4) + 4) % 4;
  std::vector<std::int8_t> out(polarity_.size(), 0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) {
      auto d = place_doubled(doubled_local(n_, r, c), k, false);
      const int col = from_doubled(d.x2, n_);
      const int row = from_doubled(-d.y2, n_);
      out[static_cast<std::size_t>(row * n_ + col)] = at(r, c);
    }
  return MagnetPixelGrid(n_, material_, std::move(out));
}

MagnetPixelGrid MagnetPixelGrid::mirrored() const {
  std::vector<std::int8_t> out(polarity_.size(), 0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) out[static_cast<std::size_t>(r * n_ + (n_ - 1 - c))] = at(r, c);
  return MagnetPixelGrid(n_, material_, std::move(out));
}

MagnetPixelGrid MagnetPixelGrid::padded_to(int n) const {
  if (n < n_) throw ValidationError("cannot pad to a smaller side");
  std::vector<std::int8_t> out(static_cast<std::size_t>(n * n), 0);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) out[static_cast<std::size_t>(r * n + c)] = at(r, c);
  return MagnetPixelGrid(n, material_, std::move(out));
}

long zero_lag_correlation(const MagnetPixelGrid& a, const MagnetPixelGrid& b) {
  if (a.n() != b.n()) throw ValidationError("zero-lag correlation needs equal grid sizes");
  long sum = 0;
  for (std::size_t i = 0; i < a.polarity().size(); ++i) sum += a.polarity()[i] * b.polarity()[i];
  return sum;
}

void validate(const Pose& pose) {
  if (pose.rot_quarter < 0 || pose.rot_quarter > 3) throw ValidationError("rot_quarter must be in {0,1,2,3}");
}

Pose inverse_pose(const Pose& pose) {
  validate(pose);
  if (!pose.mated) throw ValidationError("inverse pose is defined for mated poses only");
  // B at R*M*q + t over A  <=>  A at R*M*p - R*M*t over B.
  DoubledCoord t{-pose.dx_px, pose.dy_px};
  for (int k = 0; k < pose.rot_quarter; ++k) t = {-t.y2, t.x2};
  return Pose{-t.x2, -t.y2, pose.rot_quarter, true};
}

std::string to_string(const Pose& pose) {
  return "(dx=" + std::to_string(pose.dx_px) + ", dy=" + std::to_string(pose.dy_px) +
         ", rot=" + std::to_string(pose.rot_quarter) + ", " + (pose.mated ? "mated" : "stacked") + ")";
}

SubpixelPose to_subpixel(const Pose& pose, double pitch_mm) {
  validate(pose);
  return SubpixelPose{pose.dx_px * pitch_mm, pose.dy_px * pitch_mm, 90.0 * pose.rot_quarter, pose.mated};
}

DoubledCoord doubled_local(int n, int row, int col) { return {2 * col - (n - 1), (n - 1) - 2 * row}; }

DoubledCoord place_doubled(DoubledCoord c, int rot_quarter, bool mated) {
  if (mated) c.x2 = -c.x2;
  for (int k = 0; k < rot_quarter; ++k) c = {-c.y2, c.x2};
  return c;
}

std::string write_maggrid(const MagnetPixelGrid& grid) {
  std::string out = "MAGGRID " + std::to_string(grid.n()) + " " + text::shortest(grid.pitch_mm()) + " " +
                    text::shortest(grid.thickness_mm()) + " " + text::shortest(grid.magnetization_a_per_m()) + "\n";
  for (int r = 0; r < grid.n(); ++r) {
    for (int c = 0; c < grid.n(); ++c) {
      const auto s = grid.at(r, c);
      out += s > 0 ? '+' : (s < 0 ? '-' : '0');
    }
    out += '\n';
  }
  return out;
}

MagnetPixelGrid parse_maggrid(std::string_view text_in) {
  const auto lines = text::split_lines(text_in);
  if (lines.empty()) throw ParseError("empty MAGGRID document", 1);
  const auto head = text::split_ws(lines[0]);
  if (head.size() != 5 || head[0] != "MAGGRID")
    throw ParseError("expected header 'MAGGRID n pitch_mm thickness_mm magnetization'", 1);
  const auto n = text::parse_int(head[1]);
  const auto pitch = text::parse_double(head[2]);
  const auto thick = text::parse_double(head[3]);
  const auto mag = text::parse_double(head[4]);
  if (!n || *n < 1 || *n > 4096) throw ParseError("bad grid side '" + std::string(head[1]) + "'", 1);
  if (!pitch || !thick || !mag) throw ParseError("bad numeric field in header", 1);
  const int side = static_cast<int>(*n);
  std::vector<std::int8_t> pol;
  pol.reserve(static_cast<std::size_t>(side * side));
  for (int r = 0; r < side; ++r) {
    const int line_no = r + 2;
    if (static_cast<std::size_t>(r + 1) >= lines.size()) throw ParseError("missing grid row", line_no);
    const auto row = lines[static_cast<std::size_t>(r + 1)];
    if (row.size() != static_cast<std::size_t>(side))
      throw ParseError("row must have exactly " + std::to_string(side) + " characters", line_no);
    for (char ch : row) {
      switch (ch) {
        case '+': pol.push_back(1); break;
        case '-': pol.push_back(-1); break;
        case '0': pol.push_back(0); break;
        default: throw ParseError(std::string("invalid pixel character '") + ch + "'", line_no);
      }
    }
  }
  for (std::size_t i = static_cast<std::size_t>(side) + 1; i < lines.size(); ++i)
    if (!text::split_ws(lines[i]).empty()) throw ParseError("trailing content after grid", static_cast<int>(i) + 1);
  try {
    return MagnetPixelGrid(side, Material{*pitch, *thick, *mag}, std::move(pol));
  } catch (const ValidationError& e) {
    throw ParseError(e.what(), 1);
  }
}

MagnetPixelGrid read_maggrid_file(const std::string& path) { return parse_maggrid(text::read_file(path)); }

void write_maggrid_file(const std::string& path, const MagnetPixelGrid& grid) {
  text::write_file(path, write_maggrid(grid));
}

}  // namespace compumat
