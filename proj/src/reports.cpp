#include "compumat/reports.hpp"

#include <algorithm>
#include <cmath>

#include "compumat/text.hpp"

namespace compumat {
namespace {

std::string subpixel_text(const SubpixelPose& p) {
  return "(dx_mm=" + text::shortest(p.dx_mm) + ", dy_mm=" + text::shortest(p.dy_mm) +
         ", theta_deg=" + text::shortest(p.theta_deg) + ")";
}

}  // namespace

std::string selectivity_report_text(const CodePairSpec& spec, const SelectivityReport& r, bool with_seed) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out.append(key).append(" ").append(value).append("\n");
  };
  line("mode", r.mode == CodeMode::attract ? "attract" : "repel");
  line("n", std::to_string(spec.n));
  if (with_seed) line("seed", std::to_string(spec.rng_seed));
  line("tau", text::shortest(r.tau));
  line("gap_mm", text::shortest(spec.gap_mm));
  line("target", to_string(spec.target));
  line("target_force_n", text::shortest(r.target_force_n));
  line("lattice_worst_n", text::shortest(r.lattice_worst_n));
  line("offtarget_argmax", to_string(r.offtarget_argmax));
  if (r.dense) {
    line("dense_worst_force_n", text::shortest(r.dense->worst_force_n));
    line("dense_argmax", subpixel_text(r.dense->argmax));
    line("dense_poses", std::to_string(r.dense->poses_evaluated));
  } else {
    line("dense", "skipped");
  }
  line("worst_offtarget_force_n", text::shortest(r.worst_offtarget_force_n));
  line("ratio", text::shortest(r.ratio));
  line("pass", r.pass ? "true" : "false");
  return out;
}

std::string sweep_csv(const InteractionMap& map) {
  std::string out = "rot,dx,dy,force_n\n";
  const int h = map.n() - 1;
  for (int rot = 0; rot < 4; ++rot)
    for (int dy = -h; dy <= h; ++dy)
      for (int dx = -h; dx <= h; ++dx) {
        const double v = map.at(rot, dx, dy);
        out += std::to_string(rot) + "," + std::to_string(dx) + "," + std::to_string(dy) + "," +
               text::shortest(v == 0.0 ? 0.0 : v) + "\n";
      }
  return out;
}

std::string sweep_ppm(const InteractionMap& map) {
  const int span = map.span();
  const int width = 4 * span + 3;
  double peak = 0.0;
  for (int rot = 0; rot < 4; ++rot)
    for (double v : map.slice(rot)) peak = std::max(peak, std::abs(v));
  std::string out = "P3\n" + std::to_string(width) + " " + std::to_string(span) + "\n255\n";
  const int h = map.n() - 1;
  // Image rows run top-down, so the largest dy comes first.
  for (int dy = h; dy >= -h; --dy) {
    for (int x = 0; x < width; ++x) {
      const int rot = x / (span + 1);
      const int col = x % (span + 1);
      int r = 255, g = 255, b = 255;
      if (col == span) {
        r = g = b = 0;
      } else if (peak > 0.0) {
        const double v = map.at(rot, col - h, dy) / peak;
        const int fade = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(v))));
        if (v > 0) {
          g = b = fade;
        } else {
          r = g = fade;
        }
      }
      out += std::to_string(r) + " " + std::to_string(g) + " " + std::to_string(b) + (x + 1 == width ? "\n" : " ");
    }
  }
  return out;
}

GeneratedPair generate_and_report(const CodePairSpec& spec, bool dense, Deadline deadline) {
  auto pair = generate_pair(spec, deadline);
  if (dense) pair.report = verify_selectivity(pair.a, pair.b, spec.target, spec.tau, spec.gap_mm, true, spec.mode);
  auto text = selectivity_report_text(spec, pair.report);
  return {std::move(pair), std::move(text)};
}

FoldCheckOutcome fold_check(const FoldNet& net, const FoldCheckSettings& s) {
  const auto bonding = check_unique_bonding(net, s.gap_mm, s.f_min_n, s.tau);
  Json leds = Json::array();
  bool leds_ok = true;
  for (const auto& c : bonding.configs) {
    if (!c.bonds) continue;
    const auto folded = fold_configuration(net, c.angles);
    const auto circuit = confirm_configuration_leds(net, folded);
    Json expected = Json::array();
    bool ok = !circuit.shorted;
    if (c.intended) {
      const auto& want = net.intended[*c.intended].closed_nets;
      expected = want;
      ok = ok && std::set<std::string>(want.begin(), want.end()) == circuit.closed_nets;
    } else {
      ok = false;
    }
    leds_ok = leds_ok && ok;
    leds.push_back({{"code", c.code},
                    {"closed_nets", circuit.closed_nets},
                    {"expected_nets", expected},
                    {"shorted", circuit.shorted},
                    {"ok", ok}});
  }
  FoldCheckOutcome out;
  out.pass = bonding.pass && leds_ok;
  out.report = {{"gap_mm", s.gap_mm},  {"f_min_n", s.f_min_n}, {"tau", s.tau},
                {"bonding", to_json(net, bonding)}, {"leds", leds}, {"pass", out.pass}};
  return out;
}

FoldCheckSettings fold_settings_from_json(const Json& doc, const FoldCheckSettings& d) {
  FoldCheckSettings s = d;
  if (!doc.is_object() || !doc.contains("check")) return s;
  const auto& c = doc.at("check");
  if (!c.is_object()) throw ValidationError("fold net 'check' must be an object");
  for (const auto& [key, value] : c.items()) {
    if (!value.is_number()) throw ValidationError("check field '" + key + "' must be a number");
    if (key == "gap_mm") s.gap_mm = value.get<double>();
    else if (key == "f_min_n") s.f_min_n = value.get<double>();
    else if (key == "tau") s.tau = value.get<double>();
    else throw ValidationError("unknown field '" + key + "' in fold check");
  }
  return s;
}

}  // namespace compumat
