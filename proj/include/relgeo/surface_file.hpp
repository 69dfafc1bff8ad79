#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "relgeo/chart.hpp"

namespace relgeo::chart {

struct SurfaceDefinition {
    SurfaceChart chart;
    std::optional<Normalization> normalization;
};

// Line-oriented definition file with [surface] and [normalization] sections;
// '#' starts a comment. Malformed input raises expr::ParseError whose
// diagnostic carries the byte offset of the offending line.
SurfaceDefinition parse_surface_text(std::string_view text, std::string name);
SurfaceDefinition load_surface_file(const std::string& path);

} // namespace relgeo::chart
