#include "compumat/json_io.hpp"

#include <initializer_list>

#include "compumat/error.hpp"
#include "compumat/text.hpp"

namespace compumat {
namespace {

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw ValidationError(std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) throw ValidationError("unknown field '" + key + "' in " + std::string(where));
  }
}

double num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

long long integer(const Json& j, const char* key, long long fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(std::string("field '") + key + "' must be an integer");
  return v.get<long long>();
}

bool boolean(const Json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError(std::string("field '") + key + "' must be true or false");
  return v.get<bool>();
}

std::string str(const Json& j, const char* key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> strings(const Json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError(std::string("field '") + key + "' must be a list of strings");
  for (const auto& s : v) {
    if (!s.is_string()) throw ValidationError(std::string("field '") + key + "' must be a list of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

const Json& array_field(const Json& j, const char* key) {
  static const Json empty = Json::array();
  if (!j.contains(key)) return empty;
  if (!j.at(key).is_array()) throw ValidationError(std::string("field '") + key + "' must be a list");
  return j.at(key);
}

std::string_view mode_name(CodeMode m) { return m == CodeMode::attract ? "attract" : "repel"; }

CodeMode parse_mode(const std::string& s) {
  if (s == "attract") return CodeMode::attract;
  if (s == "repel") return CodeMode::repel;
  throw ValidationError("mode must be 'attract' or 'repel'");
}

}  // namespace

Json parse_json_text(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
  }
}

Json to_json(const Material& m) {
  return {{"pitch_mm", m.pitch_mm}, {"thickness_mm", m.thickness_mm}, {"magnetization_a_per_m", m.magnetization_a_per_m}};
}

Material material_from_json(const Json& j, const Material& d) {
  check_keys(j, {"pitch_mm", "thickness_mm", "magnetization_a_per_m"}, "material");
  Material m{num(j, "pitch_mm", d.pitch_mm), num(j, "thickness_mm", d.thickness_mm),
             num(j, "magnetization_a_per_m", d.magnetization_a_per_m)};
  (void)MagnetPixelGrid::zeros(1, m);  // validates
  return m;
}

Json to_json(const Pose& p) {
  return {{"dx_px", p.dx_px}, {"dy_px", p.dy_px}, {"rot_quarter", p.rot_quarter}, {"mated", p.mated}};
}

Pose pose_from_json(const Json& j) {
  check_keys(j, {"dx_px", "dy_px", "rot_quarter", "mated"}, "pose");
  Pose p{static_cast<int>(integer(j, "dx_px", 0)), static_cast<int>(integer(j, "dy_px", 0)),
         static_cast<int>(integer(j, "rot_quarter", 0)), boolean(j, "mated", true)};
  validate(p);
  return p;
}

Json to_json(const SubpixelPose& p) {
  return {{"dx_mm", p.dx_mm}, {"dy_mm", p.dy_mm}, {"theta_deg", p.theta_deg}, {"mated", p.mated}};
}

Json to_json(const MagnetPixelGrid& g) { return write_maggrid(g); }

MagnetPixelGrid grid_from_json(const Json& j, const DocContext& ctx) {
  if (j.is_string()) return parse_maggrid(j.get<std::string>());
  check_keys(j, {"path"}, "grid reference");
  const auto rel = str(j, "path", "");
  if (rel.empty()) throw ValidationError("grid reference needs a path");
  if (!ctx.base_dir) throw ValidationError("grid paths are not accepted here; inline the MAGGRID text");
  const auto path = std::filesystem::path(rel).is_absolute() ? std::filesystem::path(rel) : *ctx.base_dir / rel;
  return read_maggrid_file(path.string());
}

Json to_json(const CodePairSpec& s) {
  return {{"n", s.n},
          {"target", to_json(s.target)},
          {"tau", s.tau},
          {"gap_mm", s.gap_mm},
          {"rng_seed", s.rng_seed},
          {"max_iters", s.max_iters},
          {"mode", mode_name(s.mode)},
          {"material", to_json(s.material)},
          {"lambda", s.lambda}};
}

CodePairSpec spec_from_json(const Json& j, const CodePairSpec& d) {
  check_keys(j, {"n", "target", "tau", "gap_mm", "rng_seed", "max_iters", "mode", "material", "lambda"},
             "code pair spec");
  CodePairSpec s = d;
  s.n = static_cast<int>(integer(j, "n", d.n));
  if (j.contains("target")) s.target = pose_from_json(j.at("target"));
  s.tau = num(j, "tau", d.tau);
  s.gap_mm = num(j, "gap_mm", d.gap_mm);
  if (j.contains("rng_seed")) {
    const auto& v = j.at("rng_seed");
    if (!v.is_number_unsigned()) throw ValidationError("field 'rng_seed' must be a non-negative integer");
    s.rng_seed = v.get<std::uint64_t>();
  }
  s.max_iters = static_cast<int>(integer(j, "max_iters", d.max_iters));
  s.mode = parse_mode(str(j, "mode", std::string(mode_name(d.mode))));
  if (j.contains("material")) s.material = material_from_json(j.at("material"), d.material);
  s.lambda = num(j, "lambda", d.lambda);
  return s;
}

Json to_json(const SelectivityReport& r) {
  Json j{{"mode", mode_name(r.mode)},
         {"tau", r.tau},
         {"target_force_n", r.target_force_n},
         {"worst_offtarget_force_n", r.worst_offtarget_force_n},
         {"ratio", r.ratio},
         {"pass", r.pass},
         {"offtarget_argmax", to_json(r.offtarget_argmax)},
         {"lattice_worst_n", r.lattice_worst_n}};
  if (r.dense)
    j["dense"] = {{"worst_force_n", r.dense->worst_force_n},
                  {"argmax", to_json(r.dense->argmax)},
                  {"poses_evaluated", r.dense->poses_evaluated}};
  else
    j["dense"] = nullptr;
  return j;
}

Json to_json(const CodePair& p) { return {{"a", to_json(p.a)}, {"b", to_json(p.b)}, {"report", to_json(p.report)}}; }

Json to_json(const AgnosticSet& s) {
  Json pairs = Json::array();
  for (const auto& p : s.pairs) pairs.push_back(to_json(p));
  return {{"pairs", pairs}, {"crosstalk_n", s.crosstalk}, {"pass", s.pass}};
}

Json to_json(const InteractionMap& m) {
  Json slices = Json::array();
  for (int r = 0; r < 4; ++r) slices.push_back(m.slice(r));
  return {{"n", m.n()}, {"gap_mm", m.gap_mm()}, {"mated", m.mated()}, {"span", m.span()}, {"force_n", slices}};
}

Json to_json(const CircuitNet& c) {
  Json pads = Json::array();
  for (const auto& p : c.pads)
    pads.push_back({{"id", p.id},
                    {"x_mm", p.x_mm},
                    {"y_mm", p.y_mm},
                    {"radius_mm", p.radius_mm},
                    {"net", p.net},
                    {"exposed", p.exposed}});
  Json comps = Json::array();
  for (const auto& k : c.components) comps.push_back({{"id", k.id}, {"kind", to_string(k.kind)}, {"nets", k.nets}});
  Json merges = Json::array();
  for (const auto& [a, b] : c.allowed_merges) merges.push_back({a, b});
  return {{"pads", pads},
          {"components", comps},
          {"source_net", c.source_net},
          {"sink_net", c.sink_net},
          {"required_nets", c.required_nets},
          {"allowed_merges", merges}};
}

namespace {

Pad pad_from_json(const Json& j) {
  check_keys(j, {"id", "x_mm", "y_mm", "radius_mm", "net", "exposed"}, "pad");
  return {str(j, "id", ""), num(j, "x_mm", 0.0), num(j, "y_mm", 0.0), num(j, "radius_mm", 0.0), str(j, "net", ""),
          boolean(j, "exposed", true)};
}

std::vector<Pad> pads_from_json(const Json& j, const char* key) {
  std::vector<Pad> out;
  for (const auto& p : array_field(j, key)) out.push_back(pad_from_json(p));
  return out;
}

}  // namespace

CircuitNet circuit_from_json(const Json& j) {
  check_keys(j, {"pads", "components", "source_net", "sink_net", "required_nets", "allowed_merges"}, "circuit");
  CircuitNet c;
  c.pads = pads_from_json(j, "pads");
  for (const auto& k : array_field(j, "components")) {
    check_keys(k, {"id", "kind", "nets"}, "component");
    c.components.push_back({str(k, "id", ""), parse_component_kind(str(k, "kind", "")), strings(k, "nets")});
  }
  c.source_net = str(j, "source_net", "");
  c.sink_net = str(j, "sink_net", "");
  c.required_nets = strings(j, "required_nets");
  for (const auto& m : array_field(j, "allowed_merges")) {
    if (!m.is_array() || m.size() != 2 || !m[0].is_string() || !m[1].is_string())
      throw ValidationError("allowed_merges entries must be [net, net]");
    c.allowed_merges.emplace_back(m[0].get<std::string>(), m[1].get<std::string>());
  }
  return c;
}

Json to_json(const CompositeSheet& s) {
  Json layers = Json::array();
  for (const auto& l : s.layers)
    layers.push_back({{"kind", to_string(l.kind)}, {"thickness_mm", l.thickness_mm}, {"label", l.label}});
  Json j{{"side_mm", s.side_mm}, {"layers", layers}, {"grid", to_json(s.magnetic_grid)}};
  j["circuit"] = s.circuit ? to_json(*s.circuit) : Json(nullptr);
  return j;
}

CompositeSheet sheet_from_json(const Json& j, const DocContext& ctx) {
  check_keys(j, {"side_mm", "layers", "grid", "circuit"}, "sheet");
  if (!j.contains("grid")) throw ValidationError("sheet needs a grid");
  std::vector<Layer> layers;
  if (j.contains("layers")) {
    for (const auto& l : array_field(j, "layers")) {
      check_keys(l, {"kind", "thickness_mm", "label"}, "layer");
      layers.push_back({parse_layer_kind(str(l, "kind", "")), num(l, "thickness_mm", 0.0), str(l, "label", "")});
    }
  } else {
    layers = default_layup();
  }
  CompositeSheet s{layers, grid_from_json(j.at("grid"), ctx), std::nullopt, num(j, "side_mm", 50.0)};
  if (j.contains("circuit") && !j.at("circuit").is_null()) s.circuit = circuit_from_json(j.at("circuit"));
  validate(s);
  return s;
}

Json to_json(const MatingCheckResult& r) {
  Json contacts = Json::array();
  for (const auto& c : r.contacts) contacts.push_back({c.pad_a, c.pad_b});
  Json shorts = Json::array();
  for (const auto& [a, b] : r.shorted_nets) shorts.push_back({a, b});
  return {{"bonded", r.bonded},
          {"bond_force_n", r.bond_force_n},
          {"contacts", contacts},
          {"closed_nets", r.closed_nets},
          {"open_required_nets", r.open_required_nets},
          {"shorted", r.shorted},
          {"shorted_nets", shorts},
          {"authenticated", r.authenticated}};
}

namespace {

Json surface_json(const FaceSurface& s) {
  Json j = Json::object();
  if (s.grid) j["grid"] = to_json(*s.grid);
  if (!s.pads.empty()) {
    CircuitNet tmp;
    tmp.pads = s.pads;
    j["pads"] = to_json(tmp)["pads"];
  }
  return j;
}

FaceSurface surface_from_json(const Json& j, const DocContext& ctx) {
  check_keys(j, {"grid", "pads"}, "face surface");
  FaceSurface s;
  if (j.contains("grid") && !j.at("grid").is_null()) s.grid = grid_from_json(j.at("grid"), ctx);
  s.pads = pads_from_json(j, "pads");
  return s;
}

}  // namespace

Json to_json(const FoldNet& n) {
  Json faces = Json::array();
  for (const auto& f : n.faces)
    faces.push_back({{"id", f.id}, {"x", f.x}, {"y", f.y}, {"front", surface_json(f.front)}, {"back", surface_json(f.back)}});
  Json creases = Json::array();
  for (const auto& c : n.creases) creases.push_back({c.face_a, c.face_b});
  Json wiring = to_json(n.wiring);
  wiring.erase("pads");
  Json intended = Json::array();
  for (const auto& ic : n.intended)
    intended.push_back({{"angles_deg", ic.angles}, {"label", ic.label}, {"closed_nets", ic.closed_nets}});
  return {{"face_mm", n.face_mm}, {"faces", faces}, {"creases", creases}, {"wiring", wiring}, {"intended", intended}};
}

FoldNet fold_net_from_json(const Json& j, const DocContext& ctx) {
  check_keys(j, {"face_mm", "faces", "creases", "wiring", "intended", "check"}, "fold net");
  FoldNet n;
  n.face_mm = num(j, "face_mm", 20.0);
  for (const auto& f : array_field(j, "faces")) {
    check_keys(f, {"id", "x", "y", "front", "back"}, "face");
    Face face;
    face.id = str(f, "id", "");
    face.x = static_cast<int>(integer(f, "x", 0));
    face.y = static_cast<int>(integer(f, "y", 0));
    if (f.contains("front")) face.front = surface_from_json(f.at("front"), ctx);
    if (f.contains("back")) face.back = surface_from_json(f.at("back"), ctx);
    n.faces.push_back(std::move(face));
  }
  for (const auto& c : array_field(j, "creases")) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_string() || !c[1].is_string())
      throw ValidationError("creases must be [face, face] pairs");
    n.creases.push_back({c[0].get<std::string>(), c[1].get<std::string>()});
  }
  if (j.contains("wiring")) {
    if (j.at("wiring").contains("pads")) throw ValidationError("fold wiring carries no pads; put pads on face surfaces");
    n.wiring = circuit_from_json(j.at("wiring"));
  }
  for (const auto& ic : array_field(j, "intended")) {
    check_keys(ic, {"angles_deg", "label", "closed_nets"}, "intended configuration");
    IntendedConfig c;
    for (const auto& a : array_field(ic, "angles_deg")) {
      if (!a.is_number_integer()) throw ValidationError("crease angles must be integers");
      c.angles.push_back(a.get<int>());
    }
    c.label = str(ic, "label", "");
    c.closed_nets = strings(ic, "closed_nets");
    n.intended.push_back(std::move(c));
  }
  validate(n);
  return n;
}

Json to_json(const FoldNet& net, const UniqueBondingReport& r) {
  Json configs = Json::array();
  for (const auto& c : r.configs) {
    Json seats = Json::object();
    for (int s = 0; s < 2; ++s) {
      const char* side = s == 0 ? "front" : "back";
      seats[side] = c.weakest_seat_n[static_cast<std::size_t>(s)] ? Json(*c.weakest_seat_n[static_cast<std::size_t>(s)])
                                                                  : Json(nullptr);
    }
    configs.push_back({{"code", c.code},
                       {"angles_deg", c.angles},
                       {"bonds", c.bonds},
                       {"intended", c.intended ? Json(net.intended[*c.intended].label) : Json(nullptr)},
                       {"bonding_side", c.bonding_side ? Json(to_string(*c.bonding_side)) : Json(nullptr)},
                       {"weakest_seat_n", seats},
                       {"pair_forces_n", c.pair_forces_n}});
  }
  return {{"configs", configs}, {"bonding_count", r.bonding_count}, {"pass", r.pass}, {"reason", r.reason}};
}

Json to_json(const FoldCircuitCheck& c) { return {{"closed_nets", c.closed_nets}, {"shorted", c.shorted}}; }

Json to_json(const PlotterProfile& p) {
  return {{"feed_rate_mm_min", p.feed_rate_mm_min}, {"dwell_ms", p.dwell_ms},          {"z_plot_mm", p.z_plot_mm},
          {"z_travel_mm", p.z_travel_mm},           {"energize_north", p.energize_north}, {"energize_south", p.energize_south},
          {"de_energize", p.de_energize},           {"serpentine", p.serpentine}};
}

PlotterProfile plotter_from_json(const Json& j, const PlotterProfile& d) {
  check_keys(j,
             {"feed_rate_mm_min", "dwell_ms", "z_plot_mm", "z_travel_mm", "energize_north", "energize_south",
              "de_energize", "serpentine"},
             "plotter profile");
  PlotterProfile p;
  p.feed_rate_mm_min = num(j, "feed_rate_mm_min", d.feed_rate_mm_min);
  p.dwell_ms = static_cast<int>(integer(j, "dwell_ms", d.dwell_ms));
  p.z_plot_mm = num(j, "z_plot_mm", d.z_plot_mm);
  p.z_travel_mm = num(j, "z_travel_mm", d.z_travel_mm);
  p.energize_north = str(j, "energize_north", d.energize_north);
  p.energize_south = str(j, "energize_south", d.energize_south);
  p.de_energize = str(j, "de_energize", d.de_energize);
  p.serpentine = boolean(j, "serpentine", d.serpentine);
  validate(p);
  return p;
}

Json read_json_file(const std::string& path) { return parse_json_text(text::read_file(path)); }

CompositeSheet read_sheet_file(const std::string& path) {
  return sheet_from_json(read_json_file(path), {std::filesystem::path(path).parent_path()});
}

FoldNet read_fold_net_file(const std::string& path) {
  return fold_net_from_json(read_json_file(path), {std::filesystem::path(path).parent_path()});
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace compumat
