#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "compumat/error.hpp"
#include "compumat/grid.hpp"
#include "compumat/magnetics.hpp"

namespace compumat {

enum class CodeMode { attract, repel };

/// Search request for a selectively bonding pair.
struct CodePairSpec {
  int n = 8;
  Pose target{};
  double tau = 3.0;  // required target / worst off-target ratio
  double gap_mm = 0.5;
  std::uint64_t rng_seed = 42;
  int max_iters = 20000;
  CodeMode mode = CodeMode::attract;
  Material material{};
  double lambda = 1.0;  // off-target penalty weight in the annealing objective
};

void validate(const CodePairSpec& spec);

struct DenseCheck {
  double worst_force_n = 0.0;
  SubpixelPose argmax{};
  int poses_evaluated = 0;
};

struct SelectivityReport {
  CodeMode mode = CodeMode::attract;
  double tau = 3.0;
  double target_force_n = 0.0;
  /// Attract: largest off-target attraction. Repel: largest off-target |force|.
  /// Includes the dense sweep when one was run.
  double worst_offtarget_force_n = 0.0;
  double ratio = 0.0;
  bool pass = false;
  Pose offtarget_argmax{};
  double lattice_worst_n = 0.0;
  std::optional<DenseCheck> dense;
};

/// Guards the ratio denominator.
inline constexpr double kRatioEpsilonN = 1e-15;

/// Lattice verdict from an existing sweep; only the exact target pose is excluded.
SelectivityReport selectivity_from_map(const InteractionMap& map, const Pose& target, double tau,
                                       CodeMode mode = CodeMode::attract);

/// Lattice sweep, plus (when `dense`) a quarter-pixel / 15 degree subpixel sweep
/// that skips the target's self-alignment neighbourhood (|d| <= 1/2 px and
/// |dtheta| <= 7.5 deg).
SelectivityReport verify_selectivity(const MagnetPixelGrid& a, const MagnetPixelGrid& b, const Pose& target,
                                     double tau, double gap_mm, bool dense, CodeMode mode = CodeMode::attract);

struct CodePair {
  MagnetPixelGrid a;
  MagnetPixelGrid b;
  SelectivityReport report;
};

/// Search budget ran out; carries the best state found.
class BudgetExhaustedError : public BudgetError {
 public:
  BudgetExhaustedError(const std::string& what, std::vector<CodePair> best)
      : BudgetError(what), best_(std::move(best)) {}
  const std::vector<CodePair>& best() const noexcept { return best_; }

 private:
  std::vector<CodePair> best_;
};

/// Optional wall-clock cap on top of the iteration budget.
using Deadline = std::optional<std::chrono::steady_clock::time_point>;

/// Simulated annealing over single-pixel flips of both grids. Deterministic
/// for a fixed spec (seed included).
CodePair generate_pair(const CodePairSpec& spec, Deadline deadline = std::nullopt);

/// Sylvester-Hadamard rows `row_a`, `row_b` of the given order (4 or 8), tiled
/// so that every grid column carries one chip.
std::pair<MagnetPixelGrid, MagnetPixelGrid> hadamard_pair(int order, int row_a, int row_b,
                                                          const Material& material = {});

/// Largest attraction any grid of `p` exerts on any grid of `q` (p's grid as the
/// base, q's as the mating sheet) over all mated lattice poses.
double worst_cross_attraction(const CodePair& p, const CodePair& q, double gap_mm);

struct AgnosticSet {
  std::vector<CodePair> pairs;
  /// Diagonal: target force of pair i. Off-diagonal: worst_cross_attraction(i, j).
  std::vector<std::vector<double>> crosstalk;
  bool pass = false;
};

/// Checks a set against the cross-talk rule (entry (i, j) <= target_i / tau for
/// i != j) and every pair's own selectivity.
AgnosticSet verify_agnostic_set(std::vector<CodePair> pairs, double tau, double gap_mm);

/// k pairs, searched one after another; pair i anneals against its own
/// off-target poses and against every accepted pair. Seeds are spec seed + i.
AgnosticSet generate_mutually_agnostic_set(int k, const CodePairSpec& spec, Deadline deadline = std::nullopt);

}  // namespace compumat
