#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "relgeo/chart.hpp"

namespace relgeo::catalog {

struct Entry {
    std::string name;
    std::string description;
    std::string curvature_sign;  // "K > 0", "K < 0", ...
    std::string domain;
};

const std::vector<Entry>& entries();

// built-in charts: sphere, sphere3, ellipsoid:a,b,c, elliptic-paraboloid,
// hyperbolic-paraboloid, helicoid, monkey-saddle, convex-nonquadric
chart::SurfaceChart make_chart(std::string_view name);

bool is_catalog_name(std::string_view name);

} // namespace relgeo::catalog
