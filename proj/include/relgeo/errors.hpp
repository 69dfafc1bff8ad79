#pragma once

#include <stdexcept>
#include <string>

namespace relgeo {

// Geometry-side failures: degenerate metric, vanishing curvature,
// nonpositive support function, inadmissible sample point.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace relgeo
