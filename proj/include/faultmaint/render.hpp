#pragma once

#include "faultmaint/policy_io.hpp"

#include <filesystem>
#include <string>

namespace faultmaint {

/// SVG heatmap of an action grid: z runs left to right, s bottom to top.
/// DoNothing is black, Inspect gray, Repair white; a legend sits below the axis.
std::string render_svg(const ActionGrid& grid);

void write_svg(const std::filesystem::path& path, const ActionGrid& grid);

}  // namespace faultmaint
