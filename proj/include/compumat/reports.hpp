#pragma once

#include <string>

#include "compumat/codegen.hpp"
#include "compumat/fold.hpp"
#include "compumat/json_io.hpp"

namespace compumat {

/// Plain-text selectivity report written next to generated grids. The seed
/// line is left out for pairs that were not generated.
std::string selectivity_report_text(const CodePairSpec& spec, const SelectivityReport& report, bool with_seed = true);

/// "rot,dx,dy,force_n" rows ordered by rot, then dy, then dx.
std::string sweep_csv(const InteractionMap& map);

/// The four rotation slices side by side as an ASCII PPM; red attracts, blue repels.
std::string sweep_ppm(const InteractionMap& map);

struct GeneratedPair {
  CodePair pair;
  std::string report_text;
};

/// generate_pair, re-verified with the dense sweep when asked. A failed
/// re-verification is reported, not thrown.
GeneratedPair generate_and_report(const CodePairSpec& spec, bool dense, Deadline deadline = std::nullopt);

struct FoldCheckSettings {
  double gap_mm = 0.5;
  double f_min_n = 0.0;
  double tau = 3.0;
};

struct FoldCheckOutcome {
  Json report;
  bool pass = false;
};

/// Unique-bonding check plus circuit closure in every bonding configuration.
/// Passes when exactly the intended configurations bond and each of them
/// closes exactly its expected nets without a short.
FoldCheckOutcome fold_check(const FoldNet& net, const FoldCheckSettings& settings);

/// Settings from a net document's optional "check" block, over `defaults`.
FoldCheckSettings fold_settings_from_json(const Json& doc, const FoldCheckSettings& defaults);

}  // namespace compumat
