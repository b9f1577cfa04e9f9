#include <filesystem>
#include <random>

#include "compumat/config.hpp"
#include "compumat/fixtures.hpp"
#include "compumat/json_io.hpp"
#include "compumat/text.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace compumat;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("compumat_json_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("sheet documents round trip") {
  std::mt19937_64 rng(3);
  const auto [a, b] = fixtures::split_led_sheets(oracle::random_grid(rng, 8), oracle::random_grid(rng, 8),
                                                 {.mask_led_pad = true, .aux_short = true});
  for (const auto* s : {&a, &b}) {
    const auto j = to_json(*s);
    const auto back = sheet_from_json(parse_json_text(j.dump()));
    CHECK(to_json(back) == j);
    CHECK(back.magnetic_grid == s->magnetic_grid);
    CHECK(back.circuit->pads.size() == s->circuit->pads.size());
    CHECK(back.circuit->allowed_merges == s->circuit->allowed_merges);
  }
}

TEST_CASE("fold nets round trip") {
  const auto pair = generate_pair(CodePairSpec{});
  const auto net = fixtures::tube_strip(pair);
  const auto j = to_json(net);
  const auto back = fold_net_from_json(j);
  CHECK(to_json(back) == j);
  CHECK(back.faces.size() == net.faces.size());
  CHECK(back.intended.front().angles == net.intended.front().angles);
}

TEST_CASE("unknown fields are rejected") {
  Json pose = to_json(Pose{1, 2, 3, true});
  CHECK(pose_from_json(pose) == Pose{1, 2, 3, true});
  pose["dz_px"] = 1;
  CHECK_THROWS_AS(pose_from_json(pose), ValidationError);

  Json spec = to_json(CodePairSpec{});
  CHECK(spec_from_json(spec).n == 8);
  spec["colour"] = "red";
  CHECK_THROWS_AS(spec_from_json(spec), ValidationError);

  CHECK_THROWS_AS(spec_from_json(Json{{"n", "eight"}}), ValidationError);
  CHECK_THROWS_AS(spec_from_json(Json{{"mode", "sideways"}}), ValidationError);
  CHECK_THROWS_AS(pose_from_json(Json{{"rot_quarter", 4}}), ValidationError);
}

TEST_CASE("malformed JSON text raises a parse error") {
  CHECK_THROWS_AS(parse_json_text("{\"id\": 1,"), ParseError);
  CHECK_THROWS_AS(parse_json_text(""), ParseError);
}

TEST_CASE("grid paths resolve relative to the document") {
  const auto dir = scratch("paths");
  const auto grid = MagnetPixelGrid::filled(4, 1);
  write_maggrid_file((dir / "g.maggrid").string(), grid);
  Json doc{{"grid", {{"path", "g.maggrid"}}}};
  text::write_file((dir / "sheet.json").string(), doc.dump());
  const auto sheet = read_sheet_file((dir / "sheet.json").string());
  CHECK(sheet.magnetic_grid == grid);
  CHECK_FALSE(sheet.circuit.has_value());
  CHECK(stack_thickness(sheet) == doctest::Approx(3.0));
  // Over the wire there is no directory to resolve against.
  CHECK_THROWS_AS(sheet_from_json(doc), ValidationError);
  CHECK(sheet_from_json(Json{{"grid", write_maggrid(grid)}}).magnetic_grid == grid);
}

TEST_CASE("bad inline grids report their line") {
  try {
    grid_from_json(Json("MAGGRID 2 2 0.76 100000\n+-\n+x\n"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("plotter profile and config defaults") {
  const PlotterProfile d;
  CHECK(to_json(plotter_from_json(Json::object())) == to_json(d));
  CHECK(plotter_from_json(Json{{"dwell_ms", 100}}).dwell_ms == 100);
  CHECK_THROWS_AS(plotter_from_json(Json{{"feed_rate_mm_min", -1.0}}), ValidationError);

  const ProjectConfig c = config_from_json(Json{{"tau", 4.0}, {"output_dir", "build/out"}});
  CHECK(c.tau == 4.0);
  CHECK(c.gap_mm == 0.5);
  CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
  CHECK_THROWS_AS(config_from_json(Json{{"gap_mm", 0.0}}), ValidationError);
  CHECK_THROWS_AS(config_from_json(Json{{"speed", 1}}), ValidationError);
}

TEST_CASE("config resolution prefers the explicit path over the environment") {
  const auto dir = scratch("config");
  text::write_file((dir / "a.json").string(), R"({"tau": 5})");
  text::write_file((dir / "b.json").string(), R"({"tau": 6})");
  ::setenv(kConfigEnvVar, (dir / "b.json").c_str(), 1);
  CHECK(resolve_project_config(std::nullopt).tau == 6.0);
  CHECK(resolve_project_config((dir / "a.json").string()).tau == 5.0);
  ::unsetenv(kConfigEnvVar);
  CHECK(resolve_project_config(std::nullopt).tau == 3.0);
}
