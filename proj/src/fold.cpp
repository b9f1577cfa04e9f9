#include "compumat/fold.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "compumat/magnetics.hpp"

namespace compumat {
namespace {

Vec3i mul(const Mat3i& m, const Vec3i& v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

Mat3i mul(const Mat3i& a, const Mat3i& b) {
  Mat3i r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
  return r;
}

Mat3i transpose(const Mat3i& m) { return {m[0], m[3], m[6], m[1], m[4], m[7], m[2], m[5], m[8]}; }

Vec3i add(const Vec3i& a, const Vec3i& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3i sub(const Vec3i& a, const Vec3i& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
int dot(const Vec3i& a, const Vec3i& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3i cross(const Vec3i& a, const Vec3i& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

/// Quarter turn about the unit axis `a`, sign +1 or -1 (right-hand rule).
Mat3i quarter_turn(const Vec3i& a, int sign) {
  Mat3i m{};
  for (int j = 0; j < 3; ++j) {
    Vec3i e{0, 0, 0};
    e[j] = 1;
    const Vec3i c = cross(a, e);
    const int d = dot(a, e);
    for (int i = 0; i < 3; ++i) m[i * 3 + j] = d * a[i] + sign * c[i];
  }
  return m;
}

/// Fold about the edge between net-adjacent faces, moving `child` relative to `parent`.
FacePlacement crease_transform(const Face& parent, const Face& child, int angle) {
  const Vec3i u{child.x - parent.x, child.y - parent.y, 0};
  const Vec3i axis = cross(u, Vec3i{0, 0, 1});
  // A point on the shared edge, doubled.
  const Vec3i e{2 * parent.x + (u[0] > 0 ? 2 : 0), 2 * parent.y + (u[1] > 0 ? 2 : 0), 0};
  FacePlacement f;
  f.rot = quarter_turn(axis, angle > 0 ? 1 : -1);
  f.shift = sub(e, mul(f.rot, e));
  return f;
}

FacePlacement compose(const FacePlacement& outer, const FacePlacement& inner) {
  return {mul(outer.rot, inner.rot), add(mul(outer.rot, inner.shift), outer.shift)};
}

struct Geometry {
  std::array<Vec3i, 4> corners;
  Vec3i center;
  Vec3i normal;
};

Geometry face_geometry(const Face& f, const FacePlacement& t) {
  const int x = 2 * f.x, y = 2 * f.y;
  Geometry g;
  g.corners = {t.apply({x, y, 0}), t.apply({x + 2, y, 0}), t.apply({x + 2, y + 2, 0}), t.apply({x, y + 2, 0})};
  g.center = t.apply({x + 1, y + 1, 0});
  g.normal = t.normal();
  return g;
}

using Edge = std::pair<Vec3i, Vec3i>;

std::array<Edge, 4> edges_of(const Geometry& g) {
  std::array<Edge, 4> out;
  for (int i = 0; i < 4; ++i) {
    Vec3i a = g.corners[static_cast<std::size_t>(i)], b = g.corners[static_cast<std::size_t>((i + 1) % 4)];
    if (b < a) std::swap(a, b);
    out[static_cast<std::size_t>(i)] = {a, b};
  }
  return out;
}

int axis_of(const Vec3i& v) {
  for (int i = 0; i < 3; ++i)
    if (v[static_cast<std::size_t>(i)] != 0) return i;
  return -1;
}

/// Side-frame basis vector -> net-plane direction.
Vec3i side_to_net(Side s, int ex, int ey) { return {s == Side::front ? ex : -ex, ey, 0}; }

/// Two-sheet pose for q's side laid over p's side by the rigid map `closing`.
Pose reduce_pose(const FacePlacement& tp, Side sp, const FacePlacement& tq, Side sq, const Mat3i& closing) {
  // G maps q's side frame to p's side frame.
  int g[4];
  const Mat3i to_p = transpose(tp.rot);
  for (int col = 0; col < 2; ++col) {
    const Vec3i v = mul(to_p, mul(closing, mul(tq.rot, side_to_net(sq, col == 0, col == 1))));
    if (v[2] != 0) throw std::logic_error("touching surfaces are not parallel after closing");
    g[col] = sp == Side::front ? v[0] : -v[0];
    g[2 + col] = v[1];
  }
  // g = [[g0 g1] [g2 g3]]; Rot(r) = G * diag(-1, 1).
  const int r00 = -g[0], r01 = g[1], r10 = -g[2], r11 = g[3];
  const int rots[4][4] = {{1, 0, 0, 1}, {0, -1, 1, 0}, {-1, 0, 0, -1}, {0, 1, -1, 0}};
  for (int r = 0; r < 4; ++r)
    if (rots[r][0] == r00 && rots[r][1] == r01 && rots[r][2] == r10 && rots[r][3] == r11) return Pose{0, 0, r, true};
  throw std::logic_error("touching surfaces do not face each other");
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::front ? "front" : "back"; }

Vec3i FacePlacement::apply(const Vec3i& p) const { return add(mul(rot, p), shift); }

std::size_t FoldNet::face_index(std::string_view id) const {
  for (std::size_t i = 0; i < faces.size(); ++i)
    if (faces[i].id == id) return i;
  throw ValidationError("unknown face '" + std::string(id) + "'");
}

void validate(const FoldNet& net) {
  if (net.faces.empty()) throw ValidationError("fold net has no faces");
  if (!(net.face_mm > 0.0)) throw ValidationError("face_mm must be positive");
  std::set<std::string> ids;
  std::set<std::pair<int, int>> cells;
  std::set<std::string> pad_ids;
  CircuitNet all = net.wiring;
  for (const auto& f : net.faces) {
    if (f.id.empty() || !ids.insert(f.id).second) throw ValidationError("face ids must be unique and non-empty");
    if (!cells.insert({f.x, f.y}).second) throw ValidationError("two faces share a net cell");
    for (Side s : {Side::front, Side::back}) {
      const auto& surf = f.surface(s);
      if (surf.grid && surf.grid->n() * surf.grid->pitch_mm() > net.face_mm + 1e-9)
        throw ValidationError("grid on face '" + f.id + "' does not fit the face");
      for (const auto& p : surf.pads) all.pads.push_back(p);
    }
  }
  if (!all.source_net.empty() || !all.sink_net.empty() || !all.pads.empty()) {
    if (all.source_net.empty()) all.source_net = "_source";
    if (all.sink_net.empty()) all.sink_net = "_sink";
    validate(all, net.face_mm);
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& c : net.creases) {
    const auto a = net.face_index(c.face_a), b = net.face_index(c.face_b);
    const auto& fa = net.faces[a];
    const auto& fb = net.faces[b];
    if (std::abs(fa.x - fb.x) + std::abs(fa.y - fb.y) != 1)
      throw ValidationError("crease " + c.face_a + "-" + c.face_b + " joins faces that are not adjacent");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second) throw ValidationError("duplicate crease");
  }
  // Edge-connected through creases.
  std::vector<bool> reached(net.faces.size(), false);
  std::deque<std::size_t> q{0};
  reached[0] = true;
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (const auto& c : net.creases) {
      const auto a = net.face_index(c.face_a), b = net.face_index(c.face_b);
      for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}})
        if (x == u && !reached[y]) {
          reached[y] = true;
          q.push_back(y);
        }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end())
    throw ValidationError("fold net faces are not connected by creases");
  for (const auto& ic : net.intended) {
    if (ic.angles.size() != net.creases.size()) throw ValidationError("intended config '" + ic.label + "' has the wrong crease count");
    for (int a : ic.angles)
      if (a != 90 && a != -90) throw ValidationError("crease angles must be +90 or -90");
  }
}

std::vector<int> angles_from_code(std::uint32_t code, std::size_t creases) {
  std::vector<int> out(creases);
  for (std::size_t i = 0; i < creases; ++i) out[i] = ((code >> i) & 1u) ? -90 : 90;
  return out;
}

FoldedConfiguration fold_configuration(const FoldNet& net, std::span<const int> angles, std::size_t root) {
  if (angles.size() != net.creases.size()) throw ValidationError("one angle per crease is required");
  if (root >= net.faces.size()) throw ValidationError("root face out of range");
  FoldedConfiguration cfg;
  cfg.angles.assign(angles.begin(), angles.end());
  cfg.root = root;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (angles[i] != 90 && angles[i] != -90) throw ValidationError("crease angles must be +90 or -90");
    if (angles[i] < 0) cfg.code |= 1u << i;
  }

  const std::size_t nf = net.faces.size();
  std::vector<std::optional<FacePlacement>> place(nf);
  std::vector<bool> tree_edge(net.creases.size(), false);
  place[root] = FacePlacement{};
  std::deque<std::size_t> q{root};
  while (!q.empty()) {
    const auto u = q.front();
    q.pop_front();
    for (std::size_t ci = 0; ci < net.creases.size(); ++ci) {
      const auto a = net.face_index(net.creases[ci].face_a), b = net.face_index(net.creases[ci].face_b);
      const std::size_t other = a == u ? b : (b == u ? a : nf);
      if (other == nf || place[other]) continue;
      place[other] = compose(*place[u], crease_transform(net.faces[u], net.faces[other], angles[ci]));
      tree_edge[ci] = true;
      q.push_back(other);
    }
  }
  for (const auto& p : place) {
    if (!p) throw ValidationError("fold net faces are not connected by creases");
    cfg.placements.push_back(*p);
  }

  cfg.valid = true;
  for (std::size_t ci = 0; ci < net.creases.size(); ++ci) {
    if (tree_edge[ci]) continue;
    const auto a = net.face_index(net.creases[ci].face_a), b = net.face_index(net.creases[ci].face_b);
    if (!(compose(cfg.placements[a], crease_transform(net.faces[a], net.faces[b], angles[ci])) == cfg.placements[b])) {
      cfg.valid = false;
      cfg.invalid_reason = "crease " + net.creases[ci].face_a + "-" + net.creases[ci].face_b + " cannot close";
      return cfg;
    }
  }

  std::vector<Geometry> geo;
  for (std::size_t i = 0; i < nf; ++i) geo.push_back(face_geometry(net.faces[i], cfg.placements[i]));

  // Faces on the same cell wall: same normal interpenetrates, opposite normals lie face on face.
  std::map<std::pair<int, Vec3i>, std::vector<std::size_t>> walls;
  for (std::size_t i = 0; i < nf; ++i) {
    Vec3i lo = geo[i].corners[0];
    for (const auto& c : geo[i].corners)
      for (int k = 0; k < 3; ++k) lo[static_cast<std::size_t>(k)] = std::min(lo[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)]);
    walls[{axis_of(geo[i].normal), lo}].push_back(i);
  }
  for (const auto& [key, members] : walls) {
    for (std::size_t x = 0; x < members.size(); ++x)
      for (std::size_t y = x + 1; y < members.size(); ++y) {
        const auto i = members[x], j = members[y];
        if (geo[i].normal == geo[j].normal) {
          cfg.valid = false;
          cfg.invalid_reason = "faces " + net.faces[i].id + " and " + net.faces[j].id + " interpenetrate";
          cfg.touching_pairs.clear();
          return cfg;
        }
        const Mat3i identity{1, 0, 0, 0, 1, 0, 0, 0, 1};
        TouchingPair tp;
        tp.p = {i, Side::front};
        tp.q = {j, Side::front};
        tp.pose = reduce_pose(cfg.placements[i], Side::front, cfg.placements[j], Side::front, identity);
        tp.coincident = true;
        cfg.touching_pairs.push_back(tp);
      }
  }

  for (std::size_t i = 0; i < nf; ++i)
    for (std::size_t j = i + 1; j < nf; ++j) {
      if (axis_of(geo[i].normal) == axis_of(geo[j].normal)) continue;
      const auto ei = edges_of(geo[i]), ej = edges_of(geo[j]);
      std::optional<Edge> shared;
      for (const auto& a : ei)
        for (const auto& b : ej)
          if (a == b) shared = a;
      if (!shared) continue;
      const Vec3i mid2 = add(shared->first, shared->second);  // twice the doubled midpoint
      const Vec3i ui = sub(add(geo[i].center, geo[i].center), mid2);
      const Vec3i uj = sub(add(geo[j].center, geo[j].center), mid2);
      auto unit = [](Vec3i v) {
        for (auto& c : v) c = (c > 0) - (c < 0);
        return v;
      };
      const Vec3i u_i = unit(ui), u_j = unit(uj);
      TouchingPair tp;
      tp.p = {i, dot(geo[i].normal, u_j) > 0 ? Side::front : Side::back};
      tp.q = {j, dot(geo[j].normal, u_i) > 0 ? Side::front : Side::back};
      // Close the dihedral: quarter turn about the edge taking q's direction onto p's.
      const Mat3i closing = quarter_turn(cross(u_j, u_i), 1);
      tp.pose = reduce_pose(cfg.placements[i], tp.p.side, cfg.placements[j], tp.q.side, closing);
      cfg.touching_pairs.push_back(tp);
    }
  std::sort(cfg.touching_pairs.begin(), cfg.touching_pairs.end(), [](const TouchingPair& a, const TouchingPair& b) {
    return std::tie(a.p, a.q) < std::tie(b.p, b.q);
  });
  return cfg;
}

std::vector<FoldedConfiguration> enumerate_fold_configs(const FoldNet& net, std::size_t root) {
  if (net.creases.size() > static_cast<std::size_t>(kMaxCreases))
    throw BudgetError("fold net has " + std::to_string(net.creases.size()) + " creases; at most " +
                      std::to_string(kMaxCreases) + " are enumerated");
  validate(net);
  std::vector<FoldedConfiguration> out;
  const std::uint32_t total = 1u << net.creases.size();
  for (std::uint32_t code = 0; code < total; ++code) {
    auto cfg = fold_configuration(net, angles_from_code(code, net.creases.size()), root);
    if (cfg.valid) out.push_back(std::move(cfg));
  }
  return out;
}

double touching_force(const FoldNet& net, const TouchingPair& pair, double gap_mm) {
  const auto& gp = net.faces[pair.p.face].surface(pair.p.side).grid;
  const auto& gq = net.faces[pair.q.face].surface(pair.q.side).grid;
  if (!gp || !gq) return 0.0;
  return pairwise_interaction(*gp, *gq, pair.pose, gap_mm).normal_force_n;
}

UniqueBondingReport check_unique_bonding(const FoldNet& net, double gap_mm, double f_min_n, double tau) {
  if (net.intended.empty()) throw ValidationError("fold net has no intended configuration");
  if (!(f_min_n > 0.0)) throw ValidationError("f_min_n must be positive");
  if (!(tau > 1.0)) throw ValidationError("tau must be > 1");
  const auto configs = enumerate_fold_configs(net, 0);

  std::map<std::uint32_t, std::size_t> intended_code;
  for (std::size_t i = 0; i < net.intended.size(); ++i) {
    std::uint32_t code = 0;
    for (std::size_t k = 0; k < net.intended[i].angles.size(); ++k)
      if (net.intended[i].angles[k] < 0) code |= 1u << k;
    intended_code[code] = i;
  }

  UniqueBondingReport rep;
  bool exact = true, margin = true;
  std::set<std::uint32_t> bonding_codes;
  for (const auto& cfg : configs) {
    ConfigBonding cb;
    cb.code = cfg.code;
    cb.angles = cfg.angles;
    if (auto it = intended_code.find(cfg.code); it != intended_code.end()) cb.intended = it->second;

    std::map<SurfaceRef, double> seat;  // best attraction from a gridded partner
    for (const auto& tp : cfg.touching_pairs) {
      const double f = touching_force(net, tp, gap_mm);
      cb.pair_forces_n.push_back(f);
      const bool gp = net.faces[tp.p.face].surface(tp.p.side).grid.has_value();
      const bool gq = net.faces[tp.q.face].surface(tp.q.side).grid.has_value();
      if (gp && gq) {
        for (const auto& s : {tp.p, tp.q}) {
          auto [it, fresh] = seat.emplace(s, f);
          if (!fresh) it->second = std::max(it->second, f);
        }
      }
    }
    for (Side side : {Side::front, Side::back}) {
      std::optional<double> weakest;
      for (std::size_t i = 0; i < net.faces.size(); ++i) {
        if (!net.faces[i].surface(side).grid) continue;
        const auto it = seat.find({i, side});
        const double s = it == seat.end() ? 0.0 : std::max(0.0, it->second);
        weakest = weakest ? std::min(*weakest, s) : s;
      }
      cb.weakest_seat_n[side == Side::front ? 0 : 1] = weakest;
      if (weakest && *weakest >= f_min_n && !cb.bonds) {
        cb.bonds = true;
        cb.bonding_side = side;
      }
    }
    if (cb.bonds) bonding_codes.insert(cb.code);
    if (cb.bonds != cb.intended.has_value()) {
      exact = false;
      if (rep.reason.empty())
        rep.reason = "configuration " + std::to_string(cb.code) + (cb.bonds ? " bonds unexpectedly" : " fails to bond");
    }
    if (!cb.intended) {
      for (const auto& w : cb.weakest_seat_n)
        if (w && *w >= f_min_n / tau) {
          margin = false;
          if (rep.reason.empty())
            rep.reason = "configuration " + std::to_string(cb.code) + " seats every grid on one side above f_min/tau";
        }
    }
    rep.configs.push_back(std::move(cb));
  }
  for (const auto& [code, idx] : intended_code)
    if (!bonding_codes.count(code) && exact) {
      exact = false;
      rep.reason = "intended configuration '" + net.intended[idx].label + "' is not a valid fold";
    }
  rep.bonding_count = bonding_codes.size();
  rep.pass = exact && margin;
  return rep;
}

FoldCircuitCheck confirm_configuration_leds(const FoldNet& net, const FoldedConfiguration& config) {
  CircuitNet assembly = net.wiring;
  assembly.pads.clear();
  for (const auto& f : net.faces)
    for (Side s : {Side::front, Side::back})
      for (const auto& p : f.surface(s).pads) assembly.pads.push_back(p);
  FoldCircuitCheck out;
  if (assembly.pads.empty() && assembly.components.empty()) return out;

  const double tol = assembly.min_pad_radius();
  std::vector<PadContact> contacts;
  if (std::isfinite(tol)) {
    for (const auto& tp : config.touching_pairs) {
      CircuitNet cp, cq;
      cp.pads = net.faces[tp.p.face].surface(tp.p.side).pads;
      cq.pads = net.faces[tp.q.face].surface(tp.q.side).pads;
      for (const auto& k : contacts_between(cp, cq, tp.pose, 1.0, tol)) contacts.push_back({0, k.pad_a, 0, k.pad_b});
    }
  }
  const LabeledCircuit lc[] = {{"F", &assembly}};
  const auto cont = circuit_continuity(lc, contacts);
  out.shorted = cont.shorted;
  for (const auto& n : net.wiring.required_nets)
    if (cont.closed_nets.count("F:" + n)) out.closed_nets.insert(n);
  return out;
}

namespace {

/// Outward side of each face of a closed unit cube.
std::vector<Side> outward_sides(const FoldNet& net, const FoldedConfiguration& config) {
  if (!config.valid || net.faces.size() != 6) throw ValidationError("classification needs a valid six-face cube");
  std::vector<Geometry> geo;
  Vec3i lo{1 << 20, 1 << 20, 1 << 20}, hi{-(1 << 20), -(1 << 20), -(1 << 20)};
  Vec3i sum{0, 0, 0};
  for (std::size_t i = 0; i < 6; ++i) {
    geo.push_back(face_geometry(net.faces[i], config.placements[i]));
    sum = add(sum, geo.back().center);
    for (const auto& c : geo.back().corners)
      for (std::size_t k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], c[k]);
        hi[k] = std::max(hi[k], c[k]);
      }
  }
  if (sub(hi, lo) != Vec3i{2, 2, 2} || config.touching_pairs.size() != 12)
    throw ValidationError("configuration does not close a cube");
  std::vector<Side> out;
  for (const auto& g : geo) {
    // Compare against the cube center scaled by 6 to stay in integers.
    const Vec3i away = sub(Vec3i{g.center[0] * 6, g.center[1] * 6, g.center[2] * 6}, sum);
    out.push_back(dot(g.normal, away) > 0 ? Side::front : Side::back);
  }
  return out;
}

std::vector<std::string> matching_faces(const FoldNet& net, const FoldedConfiguration& config,
                                        const MagnetPixelGrid& reader, double f_min_n, double gap_mm) {
  if (!(f_min_n > 0.0)) throw ValidationError("f_min_n must be positive");
  const auto sides = outward_sides(net, config);
  std::vector<std::string> hits;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto& g = net.faces[i].surface(sides[i]).grid;
    if (!g) continue;
    if (pairwise_interaction(reader, *g, Pose{}, gap_mm).normal_force_n >= f_min_n) hits.push_back(net.faces[i].id);
  }
  return hits;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s;
}

}  // namespace

std::optional<std::string> classify_cube(const FoldNet& net, const FoldedConfiguration& config,
                                         const MagnetPixelGrid& reader, double f_min_n, double gap_mm) {
  const auto hits = matching_faces(net, config, reader, f_min_n, gap_mm);
  if (hits.size() > 1) throw AmbiguityError("reader matches several faces: " + join(hits));
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

std::optional<std::size_t> classify_among(std::span<const FoldedCube> cubes, const MagnetPixelGrid& reader,
                                          double f_min_n, double gap_mm) {
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < cubes.size(); ++i)
    if (!matching_faces(*cubes[i].net, *cubes[i].config, reader, f_min_n, gap_mm).empty()) hits.push_back(i);
  if (hits.size() > 1) {
    std::vector<std::string> names;
    for (auto h : hits) names.push_back("cube " + std::to_string(h));
    throw AmbiguityError("reader matches several cubes: " + join(names));
  }
  if (hits.empty()) return std::nullopt;
  return hits.front();
}

}  // namespace compumat
