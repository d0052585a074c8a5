#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace opdyn {

struct FigureArtifacts {
  std::vector<std::string> paths;  // emitted files (csv, svg, meta)
  std::string meta_json;           // parameter block actually used
};

const std::vector<std::string>& figure_ids();

/// Build one figure from its stored config: CSV data, an SVG plot and a meta
/// echo of the parameter block.
FigureArtifacts run_figure(const std::string& id, const std::string& config_dir,
                           const std::string& out_dir, uint64_t seed);

}  // namespace opdyn
