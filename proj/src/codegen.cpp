#include "compumat/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "compumat/sweep_engine.hpp"

namespace compumat {
namespace {

// Portable draws: std distributions are implementation-defined, these are not.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

bool in_window(const Pose& p, int n) {
  return std::abs(p.dx_px) <= n - 1 && std::abs(p.dy_px) <= n - 1;
}

double ratio_of(double target, double worst, CodeMode mode) {
  const double num = mode == CodeMode::attract ? target : -target;
  return num / std::max(worst, kRatioEpsilonN);
}

bool passes(double target, double worst, double tau, CodeMode mode) {
  const bool sign_ok = mode == CodeMode::attract ? target > 0.0 : target < 0.0;
  return sign_ok && ratio_of(target, worst, mode) >= tau;
}

double angular_distance_deg(double a, double b) {
  double d = std::fmod(std::abs(a - b), 360.0);
  return std::min(d, 360.0 - d);
}

}  // namespace

void validate(const CodePairSpec& spec) {
  if (spec.n < 2) throw ValidationError("n must be >= 2: a 1x1 grid has no off-target lattice pose");
  if (!(spec.tau > 1.0)) throw ValidationError("tau must be > 1");
  if (spec.max_iters < 1) throw ValidationError("max_iters must be >= 1");
  if (!(spec.gap_mm > 0.0)) throw ValidationError("gap_mm must be positive");
  if (!(spec.lambda >= 0.0)) throw ValidationError("lambda must be non-negative");
  validate(spec.target);
  if (!in_window(spec.target, spec.n)) throw ValidationError("target pose lies outside the sweep window");
  (void)MagnetPixelGrid::zeros(1, spec.material);  // material invariants
}

SelectivityReport selectivity_from_map(const InteractionMap& map, const Pose& target, double tau, CodeMode mode) {
  const int n = map.n();
  if (target.mated != map.mated()) throw ValidationError("target pose and sweep disagree on mating");
  if (!in_window(target, n)) throw ValidationError("target pose lies outside the sweep window");
  SelectivityReport rep;
  rep.mode = mode;
  rep.tau = tau;
  rep.target_force_n = map.at(target);
  double worst = -std::numeric_limits<double>::infinity();
  Pose arg = target;
  for (int rot = 0; rot < 4; ++rot)
    for (int dx = -(n - 1); dx <= n - 1; ++dx)
      for (int dy = -(n - 1); dy <= n - 1; ++dy) {
        if (rot == target.rot_quarter && dx == target.dx_px && dy == target.dy_px) continue;
        const double f = map.at(rot, dx, dy);
        const double v = mode == CodeMode::attract ? f : std::abs(f);
        if (v > worst) {
          worst = v;
          arg = Pose{dx, dy, rot, map.mated()};
        }
      }
  if (worst == -std::numeric_limits<double>::infinity()) worst = 0.0;  // 1x1: no off-target pose
  rep.lattice_worst_n = worst;
  rep.worst_offtarget_force_n = worst;
  rep.offtarget_argmax = arg;
  rep.ratio = ratio_of(rep.target_force_n, worst, mode);
  rep.pass = passes(rep.target_force_n, worst, tau, mode);
  return rep;
}

SelectivityReport verify_selectivity(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& target,
                                     double tau, double gap_mm, bool dense, CodeMode mode) {
  validate(target);
  const auto map = pose_sweep(a, b, gap_mm, target.mated);
  auto rep = selectivity_from_map(map, target, tau, mode);
  if (!dense) return rep;

  const int n = map.n();
  const double pitch = a.pitch_mm();
  const double target_theta = 90.0 * target.rot_quarter;
  DenseCheck dc;
  dc.worst_force_n = -std::numeric_limits<double>::infinity();
  const int steps = 4 * (n - 1);
  for (int ai = 0; ai < 24; ++ai) {
    const double theta = 15.0 * ai;
    const bool near_angle = angular_distance_deg(theta, target_theta) <= 7.5;
    for (int iy = -steps; iy <= steps; ++iy)
      for (int ix = -steps; ix <= steps; ++ix) {
        const double dx_px = 0.25 * ix, dy_px = 0.25 * iy;
        if (near_angle) {
          const double ex = dx_px - target.dx_px, ey = dy_px - target.dy_px;
          if (std::sqrt(ex * ex + ey * ey) <= 0.5) continue;
        }
        const SubpixelPose sp{dx_px * pitch, dy_px * pitch, theta, target.mated};
        const double f = subpixel_interaction(a, b, sp, gap_mm).normal_force_n;
        const double v = mode == CodeMode::attract ? f : std::abs(f);
        ++dc.poses_evaluated;
        if (v > dc.worst_force_n) {
          dc.worst_force_n = v;
          dc.argmax = sp;
        }
      }
  }
  rep.dense = dc;
  rep.worst_offtarget_force_n = std::max(rep.lattice_worst_n, dc.worst_force_n);
  rep.ratio = ratio_of(rep.target_force_n, rep.worst_offtarget_force_n, mode);
  rep.pass = passes(rep.target_force_n, rep.worst_offtarget_force_n, tau, mode);
  return rep;
}

namespace {

/// Annealing state for one pair, optionally constrained against accepted pairs.
class Annealer {
 public:
  Annealer(const CodePairSpec& spec, const std::vector<CodePair>& accepted)
      : spec_(spec),
        n_(spec.n),
        area_(static_cast<std::size_t>(spec.n * spec.n)),
        moment_(MagnetPixelGrid::zeros(1, spec.material).moment()),
        engine_(spec.n, spec.material.pitch_mm, spec.gap_mm, moment_, moment_, spec.target.mated),
        rng_(spec.rng_seed),
        slice_(static_cast<std::size_t>(engine_.window() * engine_.window())) {
    for (const auto& p : accepted) {
      if (p.a.n() != n_ || !(p.a.material() == spec.material) || !(p.b.material() == spec.material))
        throw ValidationError("agnostic set members must share size and material");
      Partner partner;
      partner.target = p.report.target_force_n;
      for (const auto* g : {&p.a, &p.b})
        for (int rot = 0; rot < 4; ++rot) partner.mating.push_back(engine_.mating_spectrum(g->polarity(), rot));
      partners_.push_back(std::move(partner));
    }
  }

  CodePair run(Deadline deadline) {
    initialise();
    Eval cur = evaluate();
    Eval best = cur;
    std::vector<std::int8_t> best_a = a_, best_b = b_;

    const double k0 = std::abs(pair_kernel_value(0, 0, spec_.material.pitch_mm, spec_.gap_mm, moment_, moment_, true));
    const double t_start = 2.0 * k0;
    const double t_end = 0.02 * k0;
    const double cooling = std::pow(t_end / t_start, 1.0 / std::max(1, spec_.max_iters));
    double temperature = t_start;

    for (int it = 0; it < spec_.max_iters && !cur.pass; ++it) {
      if (deadline && (it & 63) == 0 && std::chrono::steady_clock::now() > *deadline) break;
      const std::size_t pick = static_cast<std::size_t>(rng_() % (2 * area_));
      const bool on_a = pick < area_;
      const std::size_t idx = on_a ? pick : pick - area_;
      flip(on_a, idx);
      const Eval next = evaluate();
      const double delta = next.objective - cur.objective;
      bool accept = false;
      if (delta > 0.0) {
        accept = true;
      } else if (delta == 0.0) {
        accept = uniform01(rng_) < 0.5;
      } else {
        accept = uniform01(rng_) < std::exp(delta / temperature);
      }
      if (accept) {
        cur = next;
        if (cur.objective > best.objective || cur.pass) {
          best = cur;
          best_a = a_;
          best_b = b_;
        }
      } else {
        undo(on_a, idx);
      }
      temperature *= cooling;
    }

    const MagnetPixelGrid ga(n_, spec_.material, best_a);
    const MagnetPixelGrid gb(n_, spec_.material, best_b);
    CodePair result{ga, gb, verify_selectivity(ga, gb, spec_.target, spec_.tau, spec_.gap_mm, false, spec_.mode)};
    if (!best.pass || !result.report.pass)
      throw BudgetExhaustedError("search budget exhausted without a passing pair (best ratio " +
                                     std::to_string(result.report.ratio) + ")",
                                 {result});
    return result;
  }

 private:
  struct Partner {
    double target = 0.0;
    std::vector<SweepEngine::Spectrum> mating;  // 2 grids x 4 rotations
  };
  struct Eval {
    double objective = -std::numeric_limits<double>::infinity();
    bool pass = false;
  };

  void initialise() {
    a_.resize(area_);
    for (auto& s : a_) s = (rng_() & 1) ? 1 : -1;
    // Start from the perfect complement at zero translation: the placed mate is -a (attract) or a (repel).
    b_.assign(area_, 0);
    std::vector<std::int8_t> probe(area_);
    for (std::size_t i = 0; i < area_; ++i) {
      std::fill(probe.begin(), probe.end(), 0);
      probe[i] = 1;
      const auto placed = transform_polarity(probe, n_, spec_.target.rot_quarter, spec_.target.mated);
      const auto where = static_cast<std::size_t>(std::find(placed.begin(), placed.end(), 1) - placed.begin());
      b_[i] = static_cast<std::int8_t>(spec_.mode == CodeMode::attract ? -a_[where] : a_[where]);
    }
    spec_a_ = engine_.base_spectrum(a_);
    refresh_b();
  }

  void refresh_b() {
    spec_b_base_ = engine_.base_spectrum(b_);
    spec_b_mate_.clear();
    for (int rot = 0; rot < 4; ++rot) spec_b_mate_.push_back(engine_.mating_spectrum(b_, rot));
  }

  void flip(bool on_a, std::size_t idx) {
    if (on_a) {
      a_[idx] = static_cast<std::int8_t>(-a_[idx]);
      saved_a_ = std::move(spec_a_);
      spec_a_ = engine_.base_spectrum(a_);
    } else {
      b_[idx] = static_cast<std::int8_t>(-b_[idx]);
      saved_b_base_ = std::move(spec_b_base_);
      saved_b_mate_ = std::move(spec_b_mate_);
      spec_b_mate_.clear();
      refresh_b();
    }
  }

  void undo(bool on_a, std::size_t idx) {
    if (on_a) {
      a_[idx] = static_cast<std::int8_t>(-a_[idx]);
      spec_a_ = std::move(saved_a_);
    } else {
      b_[idx] = static_cast<std::int8_t>(-b_[idx]);
      spec_b_base_ = std::move(saved_b_base_);
      spec_b_mate_ = std::move(saved_b_mate_);
    }
  }

  Eval evaluate() {
    const Pose& t = spec_.target;
    const int w = engine_.window();
    double target = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    for (int rot = 0; rot < 4; ++rot) {
      engine_.slice(spec_a_, spec_b_mate_[static_cast<std::size_t>(rot)], slice_);
      for (int dy = -(n_ - 1); dy <= n_ - 1; ++dy)
        for (int dx = -(n_ - 1); dx <= n_ - 1; ++dx) {
          const double f = slice_[static_cast<std::size_t>((dy + n_ - 1) * w + (dx + n_ - 1))];
          if (rot == t.rot_quarter && dx == t.dx_px && dy == t.dy_px) {
            target = f;
            continue;
          }
          worst = std::max(worst, spec_.mode == CodeMode::attract ? f : std::abs(f));
        }
    }
    double effective = worst;
    for (const auto& partner : partners_) {
      double cross = -std::numeric_limits<double>::infinity();
      for (const auto* base : {&spec_a_, &spec_b_base_})
        for (const auto& mate : partner.mating) {
          engine_.slice(*base, mate, slice_);
          cross = std::max(cross, *std::max_element(slice_.begin(), slice_.end()));
        }
      // Cross-talk must stay under both targets; scale it onto our own.
      const double scale = (target > 0.0 && partner.target > 0.0) ? std::max(1.0, target / partner.target) : 1.0;
      effective = std::max(effective, cross * scale);
    }
    Eval e;
    if (spec_.mode == CodeMode::attract) {
      e.objective = target - spec_.lambda * std::max(0.0, effective);
    } else {
      e.objective = -target - spec_.lambda * effective;
    }
    e.pass = passes(target, effective, spec_.tau, spec_.mode);
    return e;
  }

  CodePairSpec spec_;
  int n_;
  std::size_t area_;
  double moment_;
  SweepEngine engine_;
  std::mt19937_64 rng_;
  std::vector<double> slice_;
  std::vector<Partner> partners_;
  std::vector<std::int8_t> a_, b_;
  SweepEngine::Spectrum spec_a_, spec_b_base_, saved_a_, saved_b_base_;
  std::vector<SweepEngine::Spectrum> spec_b_mate_, saved_b_mate_;
};

}  // namespace

CodePair generate_pair(const CodePairSpec& spec, Deadline deadline) {
  validate(spec);
  Annealer annealer(spec, {});
  return annealer.run(deadline);
}

std::pair<MagnetPixelGrid, MagnetPixelGrid> hadamard_pair(int order, int row_a, int row_b, const Material& material) {
  if (order != 4 && order != 8) throw ValidationError("Hadamard order must be 4 or 8");
  if (row_a < 0 || row_a >= order || row_b < 0 || row_b >= order)
    throw ValidationError("Hadamard row index out of range");
  auto tile = [&](int row) {
    std::vector<std::int8_t> p(static_cast<std::size_t>(order * order));
    for (int r = 0; r < order; ++r)
      for (int c = 0; c < order; ++c)
        p[static_cast<std::size_t>(r * order + c)] = (__builtin_popcount(static_cast<unsigned>(row & c)) & 1) ? -1 : 1;
    return MagnetPixelGrid(order, material, std::move(p));
  };
  return {tile(row_a), tile(row_b)};
}

double worst_cross_attraction(const CodePair& p, const CodePair& q, double gap_mm) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto* base : {&p.a, &p.b})
    for (const auto* mate : {&q.a, &q.b}) {
      const auto map = pose_sweep(*base, *mate, gap_mm, true);
      for (int rot = 0; rot < 4; ++rot)
        worst = std::max(worst, *std::max_element(map.slice(rot).begin(), map.slice(rot).end()));
    }
  return worst;
}

AgnosticSet verify_agnostic_set(std::vector<CodePair> pairs, double tau, double gap_mm) {
  AgnosticSet set;
  const std::size_t k = pairs.size();
  set.crosstalk.assign(k, std::vector<double>(k, 0.0));
  bool ok = k >= 2;
  for (std::size_t i = 0; i < k; ++i) {
    auto& p = pairs[i];
    p.report = verify_selectivity(p.a, p.b, Pose{}, tau, gap_mm, false, CodeMode::attract);
    set.crosstalk[i][i] = p.report.target_force_n;
    ok = ok && p.report.pass;
  }
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      set.crosstalk[i][j] = worst_cross_attraction(pairs[i], pairs[j], gap_mm);
      ok = ok && set.crosstalk[i][j] <= pairs[i].report.target_force_n / tau;
    }
  set.pairs = std::move(pairs);
  set.pass = ok;
  return set;
}

AgnosticSet generate_mutually_agnostic_set(int k, const CodePairSpec& spec, Deadline deadline) {
  validate(spec);
  if (k < 2) throw ValidationError("an agnostic set needs k >= 2");
  if (spec.mode != CodeMode::attract) throw ValidationError("agnostic sets are defined for attract mode only");
  if (!(spec.target == Pose{})) throw ValidationError("agnostic sets use the identity mated target");
  std::vector<CodePair> accepted;
  for (int i = 0; i < k; ++i) {
    CodePairSpec si = spec;
    si.rng_seed = spec.rng_seed + static_cast<std::uint64_t>(i);
    try {
      Annealer annealer(si, accepted);
      accepted.push_back(annealer.run(deadline));
    } catch (const BudgetExhaustedError& e) {
      auto best = accepted;
      best.insert(best.end(), e.best().begin(), e.best().end());
      throw BudgetExhaustedError("agnostic set: pair " + std::to_string(i) + ": " + e.what(), std::move(best));
    }
  }
  auto set = verify_agnostic_set(accepted, spec.tau, spec.gap_mm);
  if (!set.pass) throw BudgetExhaustedError("agnostic set failed final cross-talk verification", set.pairs);
  return set;
}

}  // namespace compumat
