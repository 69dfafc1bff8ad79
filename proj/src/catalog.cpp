#include "relgeo/catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "relgeo/errors.hpp"

namespace relgeo::catalog {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<expr::Expression> parse_all(int n, std::initializer_list<std::string_view> sources) {
    const auto params = chart::SurfaceChart::default_params(n);
    std::vector<expr::Expression> out;
    for (std::string_view s : sources) out.push_back(expr::parse_expression(s, params));
    return out;
}

chart::SurfaceChart make_ellipsoid(double a, double b, double c) {
    if (!(a > 0.0 && b > 0.0 && c > 0.0)) throw GeometryError("ellipsoid semiaxes must be positive");
    std::ostringstream name;
    name << "ellipsoid:" << a << "," << b << "," << c;
    std::ostringstream x1, x2, x3;
    x1.precision(17);
    x2.precision(17);
    x3.precision(17);
    x1 << a << "*sin(u)*cos(v)";
    x2 << b << "*sin(u)*sin(v)";
    x3 << c << "*cos(u)";
    return chart::SurfaceChart(name.str(), 2,
                               parse_all(2, {x1.str(), x2.str(), x3.str()}),
                               {{0.0, kPi}, {0.0, 2.0 * kPi}});
}

} // namespace

const std::vector<Entry>& entries() {
    static const std::vector<Entry> list = {
        {"sphere", "unit sphere in spherical coordinates", "K > 0", "[0,pi] x [0,2pi]"},
        {"ellipsoid:a,b,c", "ellipsoid with semiaxes a,b,c (default 1,1,2)", "K > 0",
         "[0,pi] x [0,2pi]"},
        {"elliptic-paraboloid", "graph z = u^2 + v^2", "K > 0", "[-1,1]^2"},
        {"hyperbolic-paraboloid", "graph z = u*v (ruled quadric)", "K < 0", "[-1,1]^2"},
        {"helicoid", "(u cos v, u sin v, v) (ruled)", "K < 0", "[-1,1] x [0,2pi]"},
        {"monkey-saddle", "graph z = u^3 - 3uv^2, origin excluded by guard", "K < 0",
         "[-1,1]^2, guard u^2+v^2 > 0.01"},
        {"convex-nonquadric", "graph z = u^2 + v^2 + u^4", "K > 0", "[-1,1]^2"},
        {"sphere3", "unit 3-sphere in R^4 (n = 3)", "K > 0", "[0,pi]^2 x [0,2pi]"},
    };
    return list;
}

chart::SurfaceChart make_chart(std::string_view name) {
    const std::string s(name);
    if (s == "sphere")
        return chart::SurfaceChart("sphere", 2,
                                   parse_all(2, {"sin(u)*cos(v)", "sin(u)*sin(v)", "cos(u)"}),
                                   {{0.0, kPi}, {0.0, 2.0 * kPi}});
    if (s == "ellipsoid") return make_ellipsoid(1.0, 1.0, 2.0);
    if (s.rfind("ellipsoid:", 0) == 0) {
        double a = 0, b = 0, c = 0;
        char comma1 = 0, comma2 = 0;
        std::istringstream is(s.substr(10));
        if (!(is >> a >> comma1 >> b >> comma2 >> c) || comma1 != ',' || comma2 != ',' || !is.eof())
            throw GeometryError("bad ellipsoid spec '" + s + "' (expected ellipsoid:a,b,c)");
        return make_ellipsoid(a, b, c);
    }
    if (s == "elliptic-paraboloid")
        return chart::SurfaceChart("elliptic-paraboloid", 2, parse_all(2, {"u", "v", "u^2 + v^2"}),
                                   {{-1.0, 1.0}, {-1.0, 1.0}});
    if (s == "hyperbolic-paraboloid")
        return chart::SurfaceChart("hyperbolic-paraboloid", 2, parse_all(2, {"u", "v", "u*v"}),
                                   {{-1.0, 1.0}, {-1.0, 1.0}});
    if (s == "helicoid")
        return chart::SurfaceChart("helicoid", 2, parse_all(2, {"u*cos(v)", "u*sin(v)", "v"}),
                                   {{-1.0, 1.0}, {0.0, 2.0 * kPi}});
    if (s == "monkey-saddle") {
        auto guards = parse_all(2, {"u^2 + v^2 - 0.01"});
        return chart::SurfaceChart("monkey-saddle", 2,
                                   parse_all(2, {"u", "v", "u^3 - 3*u*v^2"}),
                                   {{-1.0, 1.0}, {-1.0, 1.0}}, std::move(guards));
    }
    if (s == "convex-nonquadric")
        return chart::SurfaceChart("convex-nonquadric", 2,
                                   parse_all(2, {"u", "v", "u^2 + v^2 + u^4"}),
                                   {{-1.0, 1.0}, {-1.0, 1.0}});
    if (s == "sphere3")
        return chart::SurfaceChart(
            "sphere3", 3,
            parse_all(3, {"cos(u1)", "sin(u1)*cos(u2)", "sin(u1)*sin(u2)*cos(u3)",
                          "sin(u1)*sin(u2)*sin(u3)"}),
            {{0.0, kPi}, {0.0, kPi}, {0.0, 2.0 * kPi}});
    throw GeometryError("unknown catalog surface '" + s + "'");
}

bool is_catalog_name(std::string_view name) {
    const std::string s(name);
    if (s.rfind("ellipsoid:", 0) == 0) return true;
    for (const Entry& e : entries())
        if (e.name == s) return true;
    return s == "ellipsoid";
}

} // namespace relgeo::catalog
