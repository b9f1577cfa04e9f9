#pragma once

#include <optional>
#include <string>

#include "compumat/fab.hpp"
#include "compumat/grid.hpp"
#include "json.hpp"

namespace compumat {

/// Project-wide defaults shared by the CLI and the service.
struct ProjectConfig {
  Material material{};
  double gap_mm = 0.5;
  double tau = 3.0;
  PlotterProfile plotter{};
  std::string output_dir = ".";
};

void validate(const ProjectConfig& config);

nlohmann::json to_json(const ProjectConfig& config);
ProjectConfig config_from_json(const nlohmann::json& j);
ProjectConfig load_project_config(const std::string& path);

inline constexpr const char* kConfigEnvVar = "COMPUMAT_CONFIG";

/// An explicit path wins, then $COMPUMAT_CONFIG, then the built-in defaults.
ProjectConfig resolve_project_config(const std::optional<std::string>& explicit_path);

}  // namespace compumat
