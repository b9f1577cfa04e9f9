#include "compumat/cli.hpp"

#include <filesystem>
#include <ostream>

#include "CLI11.hpp"
#include "compumat/config.hpp"
#include "compumat/fixtures.hpp"
#include "compumat/json_io.hpp"
#include "compumat/reports.hpp"
#include "compumat/service.hpp"
#include "compumat/text.hpp"

namespace compumat {
namespace {

namespace fs = std::filesystem;

Pose parse_pose(const std::string& s) {
  // dx,dy,rot with an optional trailing ",stacked"
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    parts.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (parts.size() < 3 || parts.size() > 4) throw ValidationError("pose must be dx,dy,rot[,stacked]: '" + s + "'");
  Pose p;
  int* slots[] = {&p.dx_px, &p.dy_px, &p.rot_quarter};
  for (int i = 0; i < 3; ++i) {
    const auto v = text::parse_int(parts[static_cast<std::size_t>(i)]);
    if (!v) throw ValidationError("pose must be dx,dy,rot[,stacked]: '" + s + "'");
    *slots[i] = static_cast<int>(*v);
  }
  if (parts.size() == 4) {
    if (parts[3] != "stacked" && parts[3] != "mated") throw ValidationError("pose suffix must be 'stacked' or 'mated'");
    p.mated = parts[3] == "mated";
  }
  validate(p);
  return p;
}

void write_out(const std::string& path, std::string_view bytes) {
  const auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  text::write_file(path, bytes);
}

void emit(std::ostream& out, const std::optional<std::string>& path, std::string_view bytes) {
  if (path) write_out(*path, bytes);
  else out << bytes;
}

MagnetPixelGrid grid_or_sheet_grid(const std::string& path) {
  if (fs::path(path).extension() == ".json") return read_sheet_file(path).magnetic_grid;
  return read_maggrid_file(path);
}

/// Replaces inline grids in a fold-net document by files next to it.
void externalise_grids(Json& doc, const fs::path& dir) {
  for (auto& face : doc["faces"])
    for (const char* side : {"front", "back"}) {
      auto& s = face[side];
      if (!s.contains("grid")) continue;
      const std::string name = face["id"].get<std::string>() + "_" + side + ".maggrid";
      write_out((dir / name).string(), s["grid"].get<std::string>());
      s["grid"] = {{"path", name}};
    }
}

struct Options {
  std::optional<std::string> config_path;

  int n = 8;
  std::uint64_t seed = 42;
  std::optional<double> tau;
  std::optional<double> gap_mm;
  bool dense = false;
  std::optional<std::string> out;
  std::string mode = "attract";
  int max_iters = CodePairSpec{}.max_iters;
  std::string target = "0,0,0";

  std::string grid_a, grid_b;
  std::optional<std::string> heatmap;
  bool unmated = false;

  std::string pose = "0,0,0";
  std::optional<double> f_min;
  std::optional<double> tol_mm;

  std::string kind;
  std::string input;
  double side_mm = 50.0;
  int count = 1;
  double spacing_mm = 5.0;

  int port = kDefaultServicePort;
  std::string host = "127.0.0.1";
  std::optional<std::string> static_dir;
};

CodePairSpec spec_from(const Options& o, const ProjectConfig& cfg) {
  CodePairSpec s;
  s.n = o.n;
  s.rng_seed = o.seed;
  s.tau = o.tau.value_or(cfg.tau);
  s.gap_mm = o.gap_mm.value_or(cfg.gap_mm);
  s.material = cfg.material;
  s.max_iters = o.max_iters;
  s.target = parse_pose(o.target);
  if (o.mode == "attract") s.mode = CodeMode::attract;
  else if (o.mode == "repel") s.mode = CodeMode::repel;
  else throw ValidationError("mode must be 'attract' or 'repel'");
  return s;
}

int cmd_gen(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const auto spec = spec_from(o, cfg);
  const fs::path dir = o.out.value_or(cfg.output_dir);
  try {
    const auto g = generate_and_report(spec, o.dense);
    write_out((dir / "A.maggrid").string(), write_maggrid(g.pair.a));
    write_out((dir / "B.maggrid").string(), write_maggrid(g.pair.b));
    write_out((dir / "report.txt").string(), g.report_text);
    out << g.report_text;
    return g.pair.report.pass ? 0 : 1;
  } catch (const BudgetExhaustedError& e) {
    if (!e.best().empty()) {
      const auto& best = e.best().front();
      write_out((dir / "A.maggrid").string(), write_maggrid(best.a));
      write_out((dir / "B.maggrid").string(), write_maggrid(best.b));
      write_out((dir / "report.txt").string(), selectivity_report_text(spec, best.report));
    }
    throw;
  }
}

int cmd_verify(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const auto a = read_maggrid_file(o.grid_a);
  const auto b = read_maggrid_file(o.grid_b);
  auto spec = spec_from(o, cfg);
  spec.n = a.n();
  const auto r = verify_selectivity(a, b, spec.target, spec.tau, spec.gap_mm, o.dense, spec.mode);
  const auto report = selectivity_report_text(spec, r, false);
  if (o.out) write_out(*o.out, report);
  out << report;
  return r.pass ? 0 : 1;
}

int cmd_sweep(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const auto a = read_maggrid_file(o.grid_a);
  const auto b = read_maggrid_file(o.grid_b);
  const double gap = o.gap_mm.value_or(cfg.gap_mm);
  const auto map = pose_sweep(a, b, gap, !o.unmated);
  emit(out, o.out, sweep_csv(map));
  if (o.heatmap) write_out(*o.heatmap, sweep_ppm(map));
  if (o.dense) {
    const auto r = verify_selectivity(a, b, parse_pose(o.target), o.tau.value_or(cfg.tau), gap, true);
    out << dump(to_json(r));
  }
  return 0;
}

int cmd_auth(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const auto a = read_sheet_file(o.grid_a);
  const auto b = read_sheet_file(o.grid_b);
  if (!o.f_min) throw ValidationError("--f-min is required");
  const auto r = double_authenticate(a, b, parse_pose(o.pose), o.gap_mm.value_or(cfg.gap_mm), *o.f_min, o.tol_mm);
  emit(out, o.out, dump(to_json(r)));
  return r.authenticated ? 0 : 1;
}

int cmd_export(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  std::string bytes;
  if (o.kind == "circuit") {
    if (o.input.empty()) throw ValidationError("export circuit needs a sheet file");
    const auto sheet = read_sheet_file(o.input);
    if (!sheet.circuit) throw ValidationError("sheet has no circuit");
    bytes = export_dxf_circuit(*sheet.circuit, sheet.side_mm);
  } else if (o.kind == "outline") {
    bytes = export_dxf_outline(o.side_mm, o.count, o.spacing_mm);
  } else if (o.kind == "gcode") {
    if (o.input.empty()) throw ValidationError("export gcode needs a grid or sheet file");
    bytes = export_plotter_gcode(grid_or_sheet_grid(o.input), cfg.plotter);
  } else {
    throw ValidationError("unknown export kind '" + o.kind + "' (circuit, outline, gcode)");
  }
  emit(out, o.out, bytes);
  return 0;
}

int cmd_fold(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const auto doc = read_json_file(o.input);
  const auto net = fold_net_from_json(doc, {fs::path(o.input).parent_path()});
  auto s = fold_settings_from_json(doc, {cfg.gap_mm, 0.0, cfg.tau});
  if (o.gap_mm) s.gap_mm = *o.gap_mm;
  if (o.f_min) s.f_min_n = *o.f_min;
  if (o.tau) s.tau = *o.tau;
  const auto r = fold_check(net, s);
  emit(out, o.out, dump(r.report));
  return r.pass ? 0 : 1;
}

int cmd_fixture(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  const fs::path dir = o.out.value_or(cfg.output_dir);
  CodePairSpec spec;
  spec.rng_seed = o.seed;
  spec.tau = o.tau.value_or(cfg.tau);
  spec.gap_mm = o.gap_mm.value_or(cfg.gap_mm);
  spec.material = cfg.material;
  auto write_net = [&](const FoldNet& net, double f_min, const std::string& name) {
    Json doc = to_json(net);
    externalise_grids(doc, dir);
    doc["check"] = {{"gap_mm", spec.gap_mm}, {"f_min_n", f_min}, {"tau", spec.tau}};
    write_out((dir / name).string(), dump(doc));
    out << (dir / name).string() << "\n";
  };
  if (o.kind == "cube") {
    const auto set = generate_mutually_agnostic_set(3, spec);
    double f_min = set.pairs.front().report.target_force_n;
    for (const auto& p : set.pairs) f_min = std::min(f_min, p.report.target_force_n);
    write_net(fixtures::black_white_cube(set.pairs), f_min / 2.0, "cube.json");
  } else if (o.kind == "tube") {
    const auto pair = generate_pair(spec);
    write_net(fixtures::tube_strip(pair), pair.report.target_force_n / 2.0, "tube.json");
  } else if (o.kind == "split-led") {
    const auto pair = generate_pair(spec);
    const auto [a, b] = fixtures::split_led_sheets(pair.a, pair.b);
    for (const auto& [sheet, name] : {std::pair{&a, "A"}, std::pair{&b, "B"}}) {
      Json doc = to_json(*sheet);
      write_out((dir / (std::string(name) + ".maggrid")).string(), write_maggrid(sheet->magnetic_grid));
      doc["grid"] = {{"path", std::string(name) + ".maggrid"}};
      write_out((dir / ("sheet_" + std::string(name) + ".json")).string(), dump(doc));
      out << (dir / ("sheet_" + std::string(name) + ".json")).string() << "\n";
    }
    out << "f_min_n " << text::shortest(pair.report.target_force_n / 2.0) << "\n";
  } else {
    throw ValidationError("unknown fixture '" + o.kind + "' (cube, tube, split-led)");
  }
  return 0;
}

int cmd_serve(const Options& o, const ProjectConfig& cfg, std::ostream& out) {
  ServiceOptions so;
  so.config = cfg;
  Server server(so, o.static_dir);
  const int port = server.bind(o.host, o.port);
  out << "listening on http://" << o.host << ":" << port << std::endl;
  server.listen();
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and verification toolchain for magnetically coded composite sheets", "compumat"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config_path, "Project config JSON (default: $COMPUMAT_CONFIG)");

  auto spec_flags = [&o](CLI::App* c) {
    c->add_option("--n", o.n, "Grid side in pixels");
    c->add_option("--seed", o.seed, "Search seed");
    c->add_option("--tau", o.tau, "Required target to off-target ratio");
    c->add_option("--gap-mm", o.gap_mm, "Sheet gap in mm");
    c->add_flag("--dense", o.dense, "Add the quarter-pixel, 15 degree subpixel check");
    c->add_option("--mode", o.mode, "attract or repel");
    c->add_option("--target", o.target, "Target pose dx,dy,rot[,stacked]");
  };

  auto* gen = app.add_subcommand("gen", "Generate a selectively bonding pair");
  spec_flags(gen);
  gen->add_option("--out", o.out, "Output directory");
  gen->add_option("--max-iters", o.max_iters, "Annealing iterations");

  auto* verify = app.add_subcommand("verify", "Re-verify the selectivity of a pair");
  spec_flags(verify);
  verify->add_option("A", o.grid_a)->required();
  verify->add_option("B", o.grid_b)->required();
  verify->add_option("--out", o.out, "Report file");

  auto* sweep = app.add_subcommand("sweep", "Force over every lattice pose as CSV");
  sweep->add_option("A", o.grid_a)->required();
  sweep->add_option("B", o.grid_b)->required();
  sweep->add_option("--out", o.out, "CSV file (default stdout)");
  sweep->add_option("--heatmap", o.heatmap, "PPM heatmap file");
  sweep->add_option("--gap-mm", o.gap_mm, "Sheet gap in mm");
  sweep->add_flag("--unmated", o.unmated, "Stack sheets back to front instead of face to face");
  sweep->add_flag("--dense", o.dense, "Also print a dense selectivity report");
  sweep->add_option("--target", o.target, "Target pose for --dense");
  sweep->add_option("--tau", o.tau, "Ratio for --dense");

  auto* auth = app.add_subcommand("auth", "Magnetic bond plus circuit closure of two sheets");
  auth->add_option("SHEET_A", o.grid_a)->required();
  auth->add_option("SHEET_B", o.grid_b)->required();
  auth->add_option("--pose", o.pose, "dx,dy,rot[,stacked]");
  auth->add_option("--f-min", o.f_min, "Bonding threshold in N");
  auth->add_option("--gap-mm", o.gap_mm, "Sheet gap in mm");
  auth->add_option("--tol-mm", o.tol_mm, "Pad contact tolerance in mm");
  auth->add_option("--out", o.out, "Report file");

  auto* exp = app.add_subcommand("export", "Write DXF or plotter G-code");
  exp->add_option("KIND", o.kind, "circuit, outline or gcode")->required();
  exp->add_option("INPUT", o.input, "Sheet JSON (circuit), grid or sheet (gcode)");
  exp->add_option("--out", o.out, "Output file (default stdout)");
  exp->add_option("--side-mm", o.side_mm, "Outline square side");
  exp->add_option("--count", o.count, "Outline squares");
  exp->add_option("--spacing-mm", o.spacing_mm, "Gap between outline squares");

  auto* fold = app.add_subcommand("fold", "Check that only the intended fold configurations bond");
  fold->add_option("NET", o.input)->required();
  fold->add_option("--f-min", o.f_min, "Bonding threshold in N");
  fold->add_option("--tau", o.tau, "Margin ratio");
  fold->add_option("--gap-mm", o.gap_mm, "Sheet gap in mm");
  fold->add_option("--out", o.out, "Report file");

  auto* fixture = app.add_subcommand("fixture", "Write a built-in example");
  fixture->add_option("NAME", o.kind, "cube, tube or split-led")->required();
  fixture->add_option("--out", o.out, "Output directory");
  fixture->add_option("--seed", o.seed, "Search seed");
  fixture->add_option("--tau", o.tau, "Required ratio");
  fixture->add_option("--gap-mm", o.gap_mm, "Sheet gap in mm");

  auto* serve = app.add_subcommand("serve", "Local JSON-over-HTTP service");
  serve->add_option("--port", o.port, "Port");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--static", o.static_dir, "Directory served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    const auto cfg = resolve_project_config(o.config_path);
    if (gen->parsed()) return cmd_gen(o, cfg, out);
    if (verify->parsed()) return cmd_verify(o, cfg, out);
    if (sweep->parsed()) return cmd_sweep(o, cfg, out);
    if (auth->parsed()) return cmd_auth(o, cfg, out);
    if (exp->parsed()) return cmd_export(o, cfg, out);
    if (fold->parsed()) return cmd_fold(o, cfg, out);
    if (fixture->parsed()) return cmd_fixture(o, cfg, out);
    if (serve->parsed()) return cmd_serve(o, cfg, out);
  } catch (const Error& e) {
    err << "compumat: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    err << "compumat: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace compumat
