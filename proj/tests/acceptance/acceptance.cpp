// One line per headline property; exit status is nonzero if any line fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "compumat/codegen.hpp"
#include "compumat/dipole.hpp"
#include "compumat/fab.hpp"
#include "compumat/fixtures.hpp"
#include "compumat/fold.hpp"
#include "compumat/layup.hpp"
#include "compumat/magnetics.hpp"
#include "compumat/text.hpp"
#include "oracles.hpp"

using namespace compumat;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = limit_s <= 0.0 || secs < limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-22s %7.3f s%s  %s%s\n", pass ? "PASS" : "FAIL", name, secs,
              limit_s > 0.0 ? (" (limit " + text::shortest(limit_s) + " s)").c_str() : "", o.detail.c_str(),
              in_time ? "" : "  [over time limit]");
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const AgnosticSet& agnostic_set() {
  static const AgnosticSet set = generate_mutually_agnostic_set(3, CodePairSpec{});
  return set;
}

double min_target(const std::vector<CodePair>& codes) {
  double m = codes.front().report.target_force_n;
  for (const auto& c : codes) m = std::min(m, c.report.target_force_n);
  return m;
}

Outcome physics() {
  std::mt19937_64 rng(100);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  double worst_grad = 0.0, worst_newton = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 m1{unit(rng), unit(rng), unit(rng)}, m2{unit(rng), unit(rng), unit(rng)};
    Vec3 r{unit(rng), unit(rng), unit(rng)};
    r = (0.002 + 0.02 * std::abs(unit(rng))) / norm(r) * r;
    const double h = 1e-7;
    auto u = [&](const Vec3& p) { return dipole_dipole_energy(m1, m2, p); };
    const Vec3 grad{(u(r + Vec3{h, 0, 0}) - u(r - Vec3{h, 0, 0})) / (2 * h),
                    (u(r + Vec3{0, h, 0}) - u(r - Vec3{0, h, 0})) / (2 * h),
                    (u(r + Vec3{0, 0, h}) - u(r - Vec3{0, 0, h})) / (2 * h)};
    const Vec3 f = dipole_dipole_force(m1, m2, r);
    worst_grad = std::max(worst_grad, norm(f + grad) / norm(f));
    worst_newton = std::max(worst_newton, norm(f + dipole_dipole_force(m2, m1, -r)) / norm(f));
  }
  return {worst_grad <= 1e-6 && worst_newton <= 1e-12,
          "100 pairs: |F+grad U|/|F| max " + num(worst_grad) + ", third law max " + num(worst_newton)};
}

Outcome fft_correctness() {
  std::mt19937_64 rng(1616);
  double worst = 0.0;
  int poses = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = oracle::random_grid(rng, 16);
    const auto b = oracle::random_grid(rng, 16);
    const auto map = pose_sweep(a, b, 0.5);
    double peak = 0.0;
    for (int rot = 0; rot < 4; ++rot)
      for (double v : map.slice(rot)) peak = std::max(peak, std::abs(v));
    for (int rot = 0; rot < 4; ++rot)
      for (int dy = -15; dy <= 15; ++dy)
        for (int dx = -15; dx <= 15; ++dx) {
          const double want = pairwise_interaction(a, b, Pose{dx, dy, rot, true}, 0.5).normal_force_n;
          worst = std::max(worst, oracle::rel_err_floored(map.at(rot, dx, dy), want, 1e-6 * peak));
          ++poses;
        }
  }
  return {worst <= 1e-9 && poses == 10 * 4 * 31 * 31,
          std::to_string(poses) + " poses vs pairwise sum, max rel err " + num(worst)};
}

Outcome selectivity() {
  CodePairSpec spec;
  spec.n = 8;
  spec.tau = 3.0;
  spec.rng_seed = 42;
  spec.gap_mm = 0.5;
  const auto pair = generate_pair(spec);
  const auto dense = verify_selectivity(pair.a, pair.b, spec.target, spec.tau, spec.gap_mm, true);
  const double target = dense.target_force_n;
  const double worst_dense = dense.dense->worst_force_n;
  const bool ok = pair.report.pass && pair.report.ratio >= 3.0 && worst_dense <= target / 2.0;
  return {ok, "ratio " + num(pair.report.ratio) + ", target " + num(target) + " N, dense worst " +
                  num(worst_dense) + " N over " + std::to_string(dense.dense->poses_evaluated) + " poses"};
}

Outcome agnostic() {
  const auto& set = agnostic_set();
  bool diag = set.pairs.size() == 3;
  for (const auto& p : set.pairs) diag = diag && p.report.pass;
  bool cross = true;
  double worst_ratio = 0.0;
  for (std::size_t i = 0; i < set.pairs.size(); ++i)
    for (std::size_t j = 0; j < set.pairs.size(); ++j) {
      if (i == j) continue;
      // Both partners' targets bound the entry.
      const double t = std::min(set.pairs[i].report.target_force_n, set.pairs[j].report.target_force_n);
      cross = cross && set.crosstalk[i][j] <= t / 3.0;
      worst_ratio = std::max(worst_ratio, set.crosstalk[i][j] / t);
    }
  return {set.pass && diag && cross, "k=3 n=8: diagonal passes " + std::string(diag ? "yes" : "no") +
                                         ", worst cross/target " + num(worst_ratio) + " (limit 0.333)"};
}

Outcome authentication() {
  const auto pair = generate_pair(CodePairSpec{});
  const double f_min = pair.report.target_force_n / 2.0;
  int good = 0;
  for (int cell = 0; cell < 8; ++cell) {
    const bool bonded = cell & 1, closed = cell & 2, shorted = cell & 4;
    const auto gb = bonded ? pair.b : MagnetPixelGrid::zeros(8);
    const auto [a, b] = fixtures::split_led_sheets(pair.a, gb, {!closed, shorted});
    const auto r = double_authenticate(a, b, Pose{}, 0.5, f_min);
    const bool row = r.bonded == bonded && r.open_required_nets.empty() == closed && r.shorted == shorted &&
                     r.authenticated == (bonded && closed && !shorted);
    good += row ? 1 : 0;
  }
  return {good == 8, std::to_string(good) + "/8 truth-table cells"};
}

Outcome fold_uniqueness() {
  const auto& set = agnostic_set();
  const auto net = fixtures::black_white_cube(set.pairs);
  const auto rep = check_unique_bonding(net, 0.5, min_target(set.pairs) / 2.0, 3.0);
  std::vector<std::set<std::string>> lit;
  for (const auto& c : rep.configs)
    if (c.bonds) lit.push_back(confirm_configuration_leds(net, fold_configuration(net, c.angles)).closed_nets);
  const std::set<std::string> black{"LED_BLACK"}, white{"LED_WHITE"};
  const bool leds = lit.size() == 2 && ((lit[0] == black && lit[1] == white) || (lit[0] == white && lit[1] == black));
  return {rep.pass && rep.bonding_count == 2 && leds,
          std::to_string(rep.configs.size()) + " valid of 32 assignments, " + std::to_string(rep.bonding_count) +
              " bond, LEDs " + (leds ? "black/white exclusive" : "wrong")};
}

Outcome classification() {
  const auto& codes = agnostic_set().pairs;
  std::vector<FoldNet> nets;
  for (const auto& p : codes) nets.push_back(fixtures::labelled_cube(p.b));
  std::vector<FoldedConfiguration> cfgs;
  for (const auto& n : nets) cfgs.push_back(fold_configuration(n, std::vector<int>(5, 90)));
  int correct = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    bool row = true;
    for (std::size_t j = 0; j < 3; ++j) {
      const bool hit = classify_cube(nets[j], cfgs[j], codes[i].a, codes[i].report.target_force_n / 2.0).has_value();
      row = row && hit == (i == j);
    }
    correct += row ? 1 : 0;
  }
  return {correct == 3, std::to_string(correct) + "/3 readers match only their own cube"};
}

Outcome fabrication() {
  std::mt19937_64 rng(5050);
  std::uniform_real_distribution<double> pos(-20.0, 20.0), rad(0.2, 3.0);
  int round_trips = 0;
  for (int t = 0; t < 50; ++t) {
    CircuitNet c;
    c.source_net = "S";
    c.sink_net = "T";
    const int k = 1 + static_cast<int>(rng() % 16);
    for (int i = 0; i < k; ++i) c.pads.push_back({"p" + std::to_string(i), pos(rng), pos(rng), rad(rng), "S", true});
    const auto doc = circuit_document(c, 50.0);
    const auto bytes = write_dxf(doc);
    const auto back = parse_dxf(bytes);
    if (back == doc && write_dxf(back) == bytes && export_dxf_circuit(c, 50.0) == bytes) ++round_trips;
  }
  int counts = 0;
  bool deterministic = true;
  for (int t = 0; t < 50; ++t) {
    const auto g = oracle::random_grid(rng, 2 + static_cast<int>(rng() % 15));
    const auto code = export_plotter_gcode(g);
    deterministic = deterministic && code == export_plotter_gcode(g);
    int energize = 0;
    std::istringstream in(code);
    for (std::string line; std::getline(in, line);) energize += (line == "M3" || line == "M4") ? 1 : 0;
    counts += energize == g.nonzero_count() ? 1 : 0;
  }
  return {round_trips == 50 && counts == 50 && deterministic,
          "DXF round trips " + std::to_string(round_trips) + "/50, energize counts " + std::to_string(counts) +
              "/50, repeat runs identical " + (deterministic ? "yes" : "no")};
}

Outcome performance() {
  std::mt19937_64 rng(64);
  const auto a = oracle::random_grid(rng, 64);
  const auto b = oracle::random_grid(rng, 64);
  const auto t0 = std::chrono::steady_clock::now();
  const auto map = pose_sweep(a, b, 0.5);
  const double fft_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  // Brute force over every pose would take minutes; time a spread of poses and scale.
  const int samples = 16;
  double check = 0.0;
  const auto t1 = std::chrono::steady_clock::now();
  for (int i = 0; i < samples; ++i) {
    const Pose p{static_cast<int>(rng() % 127) - 63, static_cast<int>(rng() % 127) - 63, i % 4, true};
    check += pairwise_interaction(a, b, p, 0.5).normal_force_n - map.at(p);
  }
  const double per_pose = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count() / samples;
  const double brute_s = per_pose * 4 * 127 * 127;
  return {fft_s < 2.0 && std::isfinite(check), "64x64 FFT sweep " + num(fft_s) + " s (limit 2 s), brute force est. " +
                                                    num(brute_s) + " s (" + num(brute_s / fft_s) + "x slower)"};
}

Outcome layup() {
  const double total = stack_thickness(default_layup());
  const auto pair = generate_pair(CodePairSpec{});
  const auto f = thickness_sweep(pair.a, pair.b, Pose{}, 0.5, {0.1, 0.55, 0.76, 1.0});
  const bool increasing = f.size() == 4 && f[0] < f[1] && f[1] < f[2] && f[2] < f[3];
  return {std::abs(total - 3.0) <= 1e-12 && increasing,
          "stack " + text::shortest(total) + " mm, force at 0.1/0.55/0.76/1.0 mm: " + num(f[0]) + ", " + num(f[1]) +
              ", " + num(f[2]) + ", " + num(f[3]) + " N"};
}

}  // namespace

int main() {
  criterion("physics-oracle", 1.0, physics);
  criterion("fft-correctness", 10.0, fft_correctness);
  criterion("selectivity", 30.0, selectivity);
  criterion("agnostic-set", 120.0, agnostic);
  criterion("double-authentication", 0.0, authentication);
  criterion("fold-uniqueness", 30.0, fold_uniqueness);
  criterion("cube-classification", 0.0, classification);
  criterion("fabrication-files", 0.0, fabrication);
  criterion("performance", 0.0, performance);
  criterion("layup-bookkeeping", 0.0, layup);
  std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
