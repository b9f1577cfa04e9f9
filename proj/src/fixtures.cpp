#include "compumat/fixtures.hpp"

#include <tuple>

#include "compumat/error.hpp"
#include "compumat/sweep_engine.hpp"

namespace compumat::fixtures {

std::pair<CompositeSheet, CompositeSheet> split_led_sheets(const MagnetPixelGrid& grid_a,
                                                           const MagnetPixelGrid& grid_b,
                                                           SplitLedOptions options) {
  CircuitNet ca;
  ca.pads = {
      {"a_vbat", -6.0, 0.0, 1.5, "VBAT", true},
      {"a_gnd", 6.0, 0.0, 1.5, "GND", true},
      {"a_aux", 0.0, -12.0, 1.5, "AUX", true},
  };
  ca.components = {{"BAT", ComponentKind::battery, {"VBAT", "GND"}},
                   {"R_AUX", ComponentKind::resistor, {"AUX"}}};
  ca.source_net = "VBAT";
  ca.sink_net = "GND";

  CircuitNet cb;
  // Mated placement mirrors x, so B's pads sit at the mirror image of A's.
  cb.pads = {
      {"b_l1", 6.0, 0.0, 1.5, "L1", true},
      {"b_l2", -6.0, 0.0, 1.5, "L2", !options.mask_led_pad},
      {"b_l1x", 0.0, -6.0, 1.5, "L1", true},
      {"b_l1y", 0.0, 6.0, 1.5, "L1", true},
  };
  if (options.aux_short) cb.pads.push_back({"b_aux", 0.0, -12.0, 1.5, "L1", true});
  cb.components = {{"LED", ComponentKind::led, {"L1", "L2"}}};
  cb.source_net = "L1";
  cb.sink_net = "L2";
  cb.required_nets = {"L1", "L2"};

  auto layers = default_layup();
  CompositeSheet a{layers, grid_a, ca, 50.0};
  CompositeSheet b{layers, grid_b, cb, 50.0};
  return {a, b};
}

namespace {

const TouchingPair& pair_between(const FoldNet& net, const FoldedConfiguration& cfg, std::string_view x,
                                 std::string_view y) {
  const auto i = net.face_index(x), j = net.face_index(y);
  for (const auto& tp : cfg.touching_pairs)
    if ((tp.p.face == i && tp.q.face == j) || (tp.p.face == j && tp.q.face == i)) return tp;
  throw ValidationError("faces " + std::string(x) + " and " + std::string(y) + " do not touch");
}

/// Inverse of the pad placement for a zero-translation pose.
std::pair<double, double> unplace(double x, double y, const Pose& pose) {
  const auto [rx, ry] = place_point(x, y, Pose{0, 0, (4 - pose.rot_quarter) % 4, false}, 1.0);
  return {pose.mated ? -rx : rx, ry};
}

/// Code pair across a touching pair: `a` on p's surface, `b` aligned on q's.
void bond(FoldNet& net, const TouchingPair& tp, const CodePair& code) {
  net.faces[tp.p.face].surface(tp.p.side).grid = code.a;
  net.faces[tp.q.face].surface(tp.q.side).grid = align_to_pose(code.b, tp.pose);
}

/// Pad on p's surface at (x, y) and its partner on q's surface where the pose lands it on top.
void pad_pair(FoldNet& net, const TouchingPair& tp, const std::string& id, double x, double y, const std::string& p_net,
              const std::string& q_net) {
  net.faces[tp.p.face].surface(tp.p.side).pads.push_back({id + "_p", x, y, 1.0, p_net, true});
  const auto [qx, qy] = unplace(x, y, tp.pose);
  net.faces[tp.q.face].surface(tp.q.side).pads.push_back({id + "_q", qx, qy, 1.0, q_net, true});
}

}  // namespace

FoldNet cube_net_geometry(double face_mm) {
  FoldNet net;
  net.face_mm = face_mm;
  for (auto [id, x, y] : {std::tuple{"C", 1, 2}, {"N", 1, 3}, {"S", 1, 1}, {"T", 1, 0}, {"E", 2, 2}, {"W", 0, 2}}) {
    Face f;
    f.id = id;
    f.x = x;
    f.y = y;
    net.faces.push_back(std::move(f));
  }
  net.creases = {{"C", "N"}, {"C", "S"}, {"C", "E"}, {"C", "W"}, {"S", "T"}};
  return net;
}

MagnetPixelGrid align_to_pose(const MagnetPixelGrid& grid, const Pose& pose) {
  const auto want = transform_polarity(grid.polarity(), grid.n(), 0, true);
  for (int k = 0; k < 4; ++k) {
    const auto g = grid.rotated(k);
    if (transform_polarity(g.polarity(), g.n(), pose.rot_quarter, pose.mated) == want) return g;
  }
  // Rotations alone reach every mated zero-translation pose; this is a symmetric grid corner case only.
  throw ValidationError("cannot align grid to pose " + to_string(pose));
}

FoldNet black_white_cube(const std::vector<CodePair>& codes, CubeOptions options) {
  if (codes.size() != 3) throw ValidationError("the black/white cube needs three code pairs");
  FoldNet net = cube_net_geometry();
  const auto black = fold_configuration(net, std::vector<int>(5, 90));
  const auto white = fold_configuration(net, std::vector<int>(5, -90));

  const std::pair<const char*, const char*> matching[] = {{"C", "E"}, {"S", "W"}, {"N", "T"}};
  for (const auto* cfg : {&black, &white})
    for (std::size_t i = 0; i < 3; ++i) bond(net, pair_between(net, *cfg, matching[i].first, matching[i].second), codes[i]);

  net.wiring.components = {{"BAT", ComponentKind::battery, {"VBAT", "GND"}},
                           {"D_BLACK", ComponentKind::led, {"LED_BLACK", "GND"}},
                           {"D_WHITE", ComponentKind::led, {"LED_WHITE", "GND"}}};
  net.wiring.source_net = "VBAT";
  net.wiring.sink_net = "GND";
  net.wiring.required_nets = {"LED_BLACK", "LED_WHITE"};
  net.wiring.allowed_merges = {{"VBAT", "LED_BLACK"}, {"VBAT", "LED_WHITE"}};

  const auto& seam_black = pair_between(net, black, "N", "T");
  const auto& seam_white = pair_between(net, white, "N", "T");
  // Which of N/T is p decides which carries the LED pad.
  auto led_net = [&](const TouchingPair& tp, const std::string& led) {
    return net.faces[tp.p.face].id == "N" ? std::pair{led, std::string("VBAT")} : std::pair{std::string("VBAT"), led};
  };
  {
    const auto [pn, qn] = led_net(seam_black, "LED_BLACK");
    pad_pair(net, seam_black, "blk", 0.0, 7.0, pn, qn);
  }
  {
    const auto [pn, qn] = led_net(seam_white, "LED_WHITE");
    pad_pair(net, seam_white, "wht", 0.0, 7.0, pn, qn);
  }
  if (options.shared_led_flap) {
    const auto [pb, qb] = led_net(seam_black, "LED_WHITE");
    pad_pair(net, seam_black, "blk2", 6.0, 7.0, pb, qb);
    const auto [pw, qw] = led_net(seam_white, "LED_BLACK");
    pad_pair(net, seam_white, "wht2", 6.0, 7.0, pw, qw);
  }

  net.intended = {{black.angles, "black", {"LED_BLACK"}}, {white.angles, "white", {"LED_WHITE"}}};
  if (options.shared_led_flap)
    for (auto& ic : net.intended) ic.closed_nets = {"LED_BLACK", "LED_WHITE"};
  return net;
}

FoldNet tube_strip(const CodePair& code) {
  FoldNet net;
  for (int i = 0; i < 4; ++i) {
    Face f;
    f.id = "F" + std::to_string(i);
    f.x = i;
    net.faces.push_back(std::move(f));
  }
  net.creases = {{"F0", "F1"}, {"F1", "F2"}, {"F2", "F3"}};
  const auto tube = fold_configuration(net, std::vector<int>(3, 90));
  const auto& seam = pair_between(net, tube, "F0", "F3");
  bond(net, seam, code);
  net.wiring.components = {{"BAT", ComponentKind::battery, {"VBAT", "GND"}},
                           {"D_TUBE", ComponentKind::led, {"LED_TUBE", "GND"}}};
  net.wiring.source_net = "VBAT";
  net.wiring.sink_net = "GND";
  net.wiring.required_nets = {"LED_TUBE"};
  net.wiring.allowed_merges = {{"VBAT", "LED_TUBE"}};
  pad_pair(net, seam, "seam", 0.0, 7.0, "LED_TUBE", "VBAT");
  net.intended = {{tube.angles, "tube", {"LED_TUBE"}}};
  return net;
}

FoldNet labelled_cube(const MagnetPixelGrid& lid_code) {
  FoldNet net = cube_net_geometry();
  net.faces[net.face_index("T")].back.grid = lid_code;
  return net;
}

}  // namespace compumat::fixtures
