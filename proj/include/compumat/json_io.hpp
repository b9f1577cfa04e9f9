#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "compumat/codegen.hpp"
#include "compumat/fab.hpp"
#include "compumat/fold.hpp"
#include "compumat/layup.hpp"
#include "compumat/magnetics.hpp"
#include "json.hpp"

namespace compumat {

using Json = nlohmann::json;

/// Where relative grid paths in a document resolve; documents received over
/// the service have no base directory and must inline their grids.
struct DocContext {
  std::optional<std::filesystem::path> base_dir;
};

Json parse_json_text(std::string_view text);

Json to_json(const Material& m);
Material material_from_json(const Json& j, const Material& defaults = {});

Json to_json(const Pose& p);
Pose pose_from_json(const Json& j);
Json to_json(const SubpixelPose& p);

/// Grids travel as MAGGRID text, or as {"path": ...} inside files.
Json to_json(const MagnetPixelGrid& g);
MagnetPixelGrid grid_from_json(const Json& j, const DocContext& ctx = {});

Json to_json(const CodePairSpec& s);
CodePairSpec spec_from_json(const Json& j, const CodePairSpec& defaults = {});
Json to_json(const SelectivityReport& r);
Json to_json(const CodePair& p);
Json to_json(const AgnosticSet& s);
Json to_json(const InteractionMap& m);

Json to_json(const CircuitNet& c);
CircuitNet circuit_from_json(const Json& j);
Json to_json(const CompositeSheet& s);
CompositeSheet sheet_from_json(const Json& j, const DocContext& ctx = {});
Json to_json(const MatingCheckResult& r);

Json to_json(const FoldNet& n);
FoldNet fold_net_from_json(const Json& j, const DocContext& ctx = {});
Json to_json(const FoldNet& net, const UniqueBondingReport& r);
Json to_json(const FoldCircuitCheck& c);

Json to_json(const PlotterProfile& p);
PlotterProfile plotter_from_json(const Json& j, const PlotterProfile& defaults = {});

/// Reads a JSON document; relative grid paths resolve against its directory.
Json read_json_file(const std::string& path);
CompositeSheet read_sheet_file(const std::string& path);
FoldNet read_fold_net_file(const std::string& path);

/// Stable text form used for files: two-space indent, trailing newline.
std::string dump(const Json& j);

}  // namespace compumat
