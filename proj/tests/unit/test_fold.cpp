#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "compumat/codegen.hpp"
#include "compumat/error.hpp"
#include "compumat/fixtures.hpp"
#include "compumat/fold.hpp"
#include "compumat/magnetics.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compumat;

namespace {

const std::vector<CodePair>& agnostic3() {
  static const auto set = generate_mutually_agnostic_set(3, CodePairSpec{});
  return set.pairs;
}

double min_target(const std::vector<CodePair>& pairs) {
  double t = pairs[0].report.target_force_n;
  for (const auto& p : pairs) t = std::min(t, p.report.target_force_n);
  return t;
}

FoldNet strip(int faces) {
  FoldNet net;
  for (int i = 0; i < faces; ++i) {
    Face f;
    f.id = "F" + std::to_string(i);
    f.x = i;
    net.faces.push_back(f);
  }
  for (int i = 0; i + 1 < faces; ++i) net.creases.push_back({"F" + std::to_string(i), "F" + std::to_string(i + 1)});
  return net;
}

using V3 = std::array<double, 3>;

V3 place3(const FacePlacement& t, double nx, double ny) {
  const auto a = t.apply({0, 0, 0});
  const auto ex = t.apply({1, 0, 0}), ey = t.apply({0, 1, 0});
  V3 out;
  for (int k = 0; k < 3; ++k) out[k] = (a[k] + (ex[k] - a[k]) * 2 * nx + (ey[k] - a[k]) * 2 * ny) / 2.0;
  return out;
}

double dot3(const V3& a, const V3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
V3 sub3(const V3& a, const V3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
V3 axpy(const V3& a, double s, const V3& d) { return {a[0] + s * d[0], a[1] + s * d[1], a[2] + s * d[2]}; }

/// Side-frame point (face units) of q's surface mapped into p's side frame by
/// unfolding the dihedral: keep the coordinate along the shared edge and the
/// distance from it.
std::pair<double, double> unfold_oracle(const FoldNet& net, const FoldedConfiguration& cfg, const TouchingPair& tp,
                                        double lx, double ly) {
  const auto& fp = net.faces[tp.p.face];
  const auto& fq = net.faces[tp.q.face];
  const auto& tp_ = cfg.placements[tp.p.face];
  const auto& tq = cfg.placements[tp.q.face];
  auto to3 = [](const Face& f, const FacePlacement& t, Side s, double x, double y) {
    return place3(t, f.x + 0.5 + (s == Side::front ? x : -x), f.y + 0.5 + y);
  };
  const V3 X = to3(fq, tq, tp.q.side, lx, ly);
  V3 image = X;
  if (!tp.coincident) {
    std::vector<V3> cp, cq;
    for (auto [x, y] : {std::pair{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
      cp.push_back(place3(tp_, fp.x + x, fp.y + y));
      cq.push_back(place3(tq, fq.x + x, fq.y + y));
    }
    std::vector<V3> shared;
    for (const auto& a : cp)
      for (const auto& b : cq)
        if (dot3(sub3(a, b), sub3(a, b)) < 1e-18) shared.push_back(a);
    REQUIRE(shared.size() == 2);
    const V3 dir = sub3(shared[1], shared[0]);
    const double t = dot3(sub3(X, shared[0]), dir);
    const V3 foot = axpy(shared[0], t, dir);
    const double d = std::sqrt(dot3(sub3(X, foot), sub3(X, foot)));
    const V3 pc = to3(fp, tp_, Side::front, 0, 0);
    const double tc = dot3(sub3(pc, shared[0]), dir);
    V3 up = sub3(pc, axpy(shared[0], tc, dir));
    const double nu = std::sqrt(dot3(up, up));
    for (auto& c : up) c /= nu;
    image = axpy(foot, d, up);
  }
  // Back into p's side frame through the inverse (orthogonal) placement.
  const V3 o = place3(tp_, 0, 0);
  const V3 ex = sub3(place3(tp_, 1, 0), o), ey = sub3(place3(tp_, 0, 1), o);
  const double nx = dot3(sub3(image, o), ex), ny = dot3(sub3(image, o), ey);
  const double x = nx - fp.x - 0.5, y = ny - fp.y - 0.5;
  return {tp.p.side == Side::front ? x : -x, y};
}

}  // namespace

TEST_CASE("cube net folds into two closed cubes") {
  const auto net = fixtures::cube_net_geometry();
  const auto black = fold_configuration(net, std::vector<int>(5, 90));
  const auto white = fold_configuration(net, std::vector<int>(5, -90));
  for (const auto* cfg : {&black, &white}) {
    CHECK(cfg->valid);
    CHECK(cfg->touching_pairs.size() == 12);
    int crease_pairs = 0;
    for (const auto& tp : cfg->touching_pairs) {
      CHECK(tp.p.side == tp.q.side);
      CHECK_FALSE(tp.coincident);
      for (const auto& c : net.creases) {
        const auto a = net.face_index(c.face_a), b = net.face_index(c.face_b);
        crease_pairs += (tp.p.face == std::min(a, b) && tp.q.face == std::max(a, b));
      }
    }
    CHECK(crease_pairs == 5);
  }
  CHECK(black.touching_pairs.front().p.side == Side::front);
  CHECK(white.touching_pairs.front().p.side == Side::back);
  CHECK(enumerate_fold_configs(net).size() == 32);
}

TEST_CASE("book fold") {
  const auto net = strip(2);
  const auto all = enumerate_fold_configs(net);
  REQUIRE(all.size() == 2);
  for (const auto& c : all) CHECK(c.touching_pairs.size() == 1);
  CHECK(all[0].touching_pairs[0].p.side == Side::front);
  CHECK(all[1].touching_pairs[0].p.side == Side::back);
  // Closing the book reflects across the crease line, which is x = const here.
  CHECK(all[0].touching_pairs[0].pose == Pose{0, 0, 0, true});
}

TEST_CASE("interpenetration and inconsistent cycles") {
  const auto five = strip(5);
  const auto rolled = fold_configuration(five, std::vector<int>(4, 90));
  CHECK_FALSE(rolled.valid);
  CHECK(rolled.invalid_reason.find("interpenetrate") != std::string::npos);

  FoldNet square;
  for (auto [id, x, y] : {std::tuple{"A", 0, 0}, {"B", 1, 0}, {"C", 1, 1}, {"D", 0, 1}}) {
    Face f;
    f.id = id;
    f.x = x;
    f.y = y;
    square.faces.push_back(f);
  }
  square.creases = {{"A", "B"}, {"B", "C"}, {"C", "D"}, {"D", "A"}};
  CHECK(enumerate_fold_configs(square).empty());
  CHECK(fold_configuration(square, std::vector<int>(4, 90)).invalid_reason.find("cannot close") != std::string::npos);

  CHECK_THROWS_AS(enumerate_fold_configs(strip(14)), BudgetError);
  CHECK_NOTHROW(fold_configuration(strip(14), std::vector<int>(13, 90)));
}

TEST_CASE("net validation") {
  auto net = strip(3);
  net.creases.push_back({"F0", "F2"});
  CHECK_THROWS_AS(validate(net), ValidationError);
  net = strip(3);
  net.creases.pop_back();
  CHECK_THROWS_AS(validate(net), ValidationError);
  net = strip(2);
  net.faces[1].front.grid = MagnetPixelGrid::zeros(11);
  CHECK_THROWS_AS(validate(net), ValidationError);
  net = strip(2);
  net.faces[0].front.pads = {{"x", 0, 0, 1, "N", true}};
  net.faces[1].back.pads = {{"x", 0, 0, 1, "N", true}};
  CHECK_THROWS_AS(validate(net), ValidationError);
}

TEST_CASE("re-rooting changes placements by one rigid motion") {
  const auto net = fixtures::cube_net_geometry();
  for (std::uint32_t code = 0; code < 32; ++code) {
    const auto angles = angles_from_code(code, 5);
    const auto ref = fold_configuration(net, angles, 0);
    for (std::size_t root = 1; root < net.faces.size(); ++root) {
      const auto other = fold_configuration(net, angles, root);
      CHECK(other.valid == ref.valid);
      CHECK(other.touching_pairs == ref.touching_pairs);
      // g = other[0] o ref[0]^-1 must carry every ref placement to the other one.
      const auto& a = ref.placements[0];
      const auto& b = other.placements[0];
      for (std::size_t i = 0; i < net.faces.size(); ++i)
        for (const Vec3i probe : {Vec3i{0, 0, 0}, Vec3i{1, 0, 0}, Vec3i{0, 1, 0}, Vec3i{0, 0, 1}}) {
          // Find p with a.apply(p) = ref[i].apply(probe): rotations are orthogonal.
          const Vec3i w = ref.placements[i].apply(probe);
          Vec3i d{w[0] - a.shift[0], w[1] - a.shift[1], w[2] - a.shift[2]};
          Vec3i p{a.rot[0] * d[0] + a.rot[3] * d[1] + a.rot[6] * d[2], a.rot[1] * d[0] + a.rot[4] * d[1] + a.rot[7] * d[2],
                  a.rot[2] * d[0] + a.rot[5] * d[1] + a.rot[8] * d[2]};
          CHECK(b.apply(p) == other.placements[i].apply(probe));
        }
    }
  }
}

TEST_CASE("negating every crease mirrors the configuration") {
  const auto net = fixtures::cube_net_geometry();
  for (std::uint32_t code = 0; code < 32; ++code) {
    const auto c = fold_configuration(net, angles_from_code(code, 5));
    const auto m = fold_configuration(net, angles_from_code(code ^ 31u, 5));
    REQUIRE(c.touching_pairs.size() == m.touching_pairs.size());
    std::map<std::pair<std::size_t, std::size_t>, std::pair<Side, Side>> sides;
    for (const auto& x : c.touching_pairs) sides[{x.p.face, x.q.face}] = {x.p.side, x.q.side};
    for (const auto& y : m.touching_pairs) {
      const auto it = sides.find({y.p.face, y.q.face});
      REQUIRE(it != sides.end());
      CHECK(it->second.first != y.p.side);
      CHECK(it->second.second != y.q.side);
    }
  }
}

TEST_CASE("reduced poses agree with unfolding the dihedral") {
  const auto net = fixtures::cube_net_geometry();
  const std::pair<double, double> samples[] = {{0.3, -0.2}, {-0.41, 0.17}, {0.05, 0.44}};
  for (const auto& cfg : enumerate_fold_configs(net))
    for (const auto& tp : cfg.touching_pairs)
      for (auto [lx, ly] : samples) {
        const auto want = unfold_oracle(net, cfg, tp, lx, ly);
        const auto got = place_point(lx, ly, tp.pose, 1.0);
        CHECK(std::abs(got.first - want.first) <= 1e-12);
        CHECK(std::abs(got.second - want.second) <= 1e-12);
      }
}

TEST_CASE("fold bond forces match the two-sheet evaluation") {
  const auto& codes = agnostic3();
  const auto net = fixtures::black_white_cube(codes);
  const auto cfg = fold_configuration(net, std::vector<int>(5, 90));
  for (const auto& tp : cfg.touching_pairs) {
    const auto& gp = *net.faces[tp.p.face].surface(tp.p.side).grid;
    const auto& gq = *net.faces[tp.q.face].surface(tp.q.side).grid;
    const double f = touching_force(net, tp, 0.5);
    CHECK(oracle::rel_err(f, pairwise_interaction(gp, gq, tp.pose, 0.5).normal_force_n) <= 1e-12);
    const double brute = oracle::normal_force(gp, gq, 0.0, 0.0, 90.0 * tp.pose.rot_quarter, true, 0.5);
    CHECK(oracle::rel_err_floored(f, brute, 1e-9) <= 1e-9);
  }
}

TEST_CASE("black and white cube bond uniquely and light their own LED") {
  const auto& codes = agnostic3();
  const double f_min = min_target(codes) / 2.0;
  const auto net = fixtures::black_white_cube(codes);
  const auto rep = check_unique_bonding(net, 0.5, f_min, 3.0);
  CHECK(rep.pass);
  CHECK(rep.configs.size() == 32);
  CHECK(rep.bonding_count == 2);
  for (const auto& cb : rep.configs) {
    CHECK(cb.bonds == (cb.code == 0 || cb.code == 31));
    if (cb.bonds) {
      REQUIRE(cb.intended.has_value());
      const auto cfg = fold_configuration(net, cb.angles);
      const auto leds = confirm_configuration_leds(net, cfg);
      const auto& want = net.intended[*cb.intended].closed_nets;
      CHECK(leds.closed_nets == std::set<std::string>(want.begin(), want.end()));
      CHECK_FALSE(leds.shorted);
    }
  }
  FoldedConfiguration flat;
  flat.placements.resize(net.faces.size());
  CHECK(confirm_configuration_leds(net, flat).closed_nets.empty());

  const auto shared = fixtures::black_white_cube(codes, {true});
  for (int angle : {90, -90}) {
    const auto leds = confirm_configuration_leds(shared, fold_configuration(shared, std::vector<int>(5, angle)));
    CHECK(leds.closed_nets == std::set<std::string>{"LED_BLACK", "LED_WHITE"});
  }
}

TEST_CASE("zeroed grids never bond") {
  auto net = fixtures::black_white_cube(agnostic3());
  for (auto& f : net.faces)
    for (Side s : {Side::front, Side::back})
      if (f.surface(s).grid) f.surface(s).grid = MagnetPixelGrid::zeros(f.surface(s).grid->n());
  const auto rep = check_unique_bonding(net, 0.5, 1.0, 3.0);
  CHECK(rep.bonding_count == 0);
  CHECK_FALSE(rep.pass);
}

TEST_CASE("book fold with a code pair bonds in one direction only") {
  auto net = strip(2);
  const auto pair = generate_pair(CodePairSpec{});
  const auto cfg = fold_configuration(net, std::vector<int>{90});
  const auto& tp = cfg.touching_pairs[0];
  net.faces[tp.p.face].front.grid = pair.a;
  net.faces[tp.q.face].front.grid = fixtures::align_to_pose(pair.b, tp.pose);
  net.intended = {{{90}, "closed", {}}};
  const auto rep = check_unique_bonding(net, 0.5, pair.report.target_force_n / 2.0, 3.0);
  CHECK(rep.bonding_count == 1);
  CHECK(rep.pass);
  CHECK(rep.configs[0].pair_forces_n[0] == doctest::Approx(pair.report.target_force_n).epsilon(1e-12));
}

TEST_CASE("tube strip") {
  const auto pair = generate_pair(CodePairSpec{});
  const auto net = fixtures::tube_strip(pair);
  const auto rep = check_unique_bonding(net, 0.5, pair.report.target_force_n / 2.0, 3.0);
  CHECK(rep.pass);
  CHECK(rep.bonding_count == 1);
  for (const auto& cfg : enumerate_fold_configs(net)) {
    const auto leds = confirm_configuration_leds(net, cfg);
    CHECK((leds.closed_nets.count("LED_TUBE") == 1) == (cfg.code == 0));
  }
}

TEST_CASE("cube classification") {
  const auto& codes = agnostic3();
  std::vector<FoldNet> nets;
  for (const auto& p : codes) nets.push_back(fixtures::labelled_cube(p.b));
  std::vector<FoldedConfiguration> cfgs;
  for (const auto& n : nets) cfgs.push_back(fold_configuration(n, std::vector<int>(5, 90)));
  std::vector<FoldedCube> cubes;
  for (std::size_t i = 0; i < 3; ++i) cubes.push_back({&nets[i], &cfgs[i]});

  for (std::size_t i = 0; i < 3; ++i) {
    const double f_min = codes[i].report.target_force_n / 2.0;
    CHECK(classify_among(cubes, codes[i].a, f_min) == std::optional<std::size_t>{i});
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(classify_cube(nets[j], cfgs[j], codes[i].a, f_min) ==
            (i == j ? std::optional<std::string>{"T"} : std::nullopt));
  }
  CHECK_FALSE(classify_cube(nets[0], cfgs[0], MagnetPixelGrid::zeros(8), 1e-9).has_value());

  const std::vector<FoldedCube> twins{{&nets[0], &cfgs[0]}, {&nets[0], &cfgs[0]}};
  CHECK_THROWS_AS(classify_among(twins, codes[0].a, codes[0].report.target_force_n / 2.0), AmbiguityError);

  auto both = nets[0];
  both.faces[both.face_index("N")].back.grid = codes[0].b;
  const auto cfg_both = fold_configuration(both, std::vector<int>(5, 90));
  CHECK_THROWS_AS(classify_cube(both, cfg_both, codes[0].a, codes[0].report.target_force_n / 2.0), AmbiguityError);

  const auto open = fold_configuration(nets[0], angles_from_code(1, 5));
  CHECK_THROWS_AS(classify_cube(nets[0], open, codes[0].a, 1.0), ValidationError);
}
