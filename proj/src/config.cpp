#include "compumat/config.hpp"

#include <cstdlib>

#include "compumat/error.hpp"
#include "compumat/json_io.hpp"

namespace compumat {

void validate(const ProjectConfig& c) {
  (void)MagnetPixelGrid::zeros(1, c.material);
  if (!(c.gap_mm > 0.0)) throw ValidationError("config gap_mm must be positive");
  if (!(c.tau > 1.0)) throw ValidationError("config tau must exceed 1");
  validate(c.plotter);
  if (c.output_dir.empty()) throw ValidationError("config output_dir must not be empty");
}

nlohmann::json to_json(const ProjectConfig& c) {
  return {{"material", to_json(c.material)},
          {"gap_mm", c.gap_mm},
          {"tau", c.tau},
          {"plotter", to_json(c.plotter)},
          {"output_dir", c.output_dir}};
}

ProjectConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  ProjectConfig c;
  for (const auto& [key, value] : j.items()) {
    if (key == "material") {
      c.material = material_from_json(value);
    } else if (key == "gap_mm" || key == "tau") {
      if (!value.is_number()) throw ValidationError("config field '" + key + "' must be a number");
      (key == "tau" ? c.tau : c.gap_mm) = value.get<double>();
    } else if (key == "plotter") {
      c.plotter = plotter_from_json(value);
    } else if (key == "output_dir") {
      if (!value.is_string()) throw ValidationError("config field 'output_dir' must be a string");
      c.output_dir = value.get<std::string>();
    } else {
      throw ValidationError("unknown field '" + key + "' in config");
    }
  }
  validate(c);
  return c;
}

ProjectConfig load_project_config(const std::string& path) { return config_from_json(read_json_file(path)); }

ProjectConfig resolve_project_config(const std::optional<std::string>& explicit_path) {
  if (explicit_path) return load_project_config(*explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env != nullptr && *env != '\0') return load_project_config(env);
  return {};
}

}  // namespace compumat
