#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "relgeo/catalog.hpp"
#include "relgeo/euclid.hpp"

using namespace relgeo;
using euclid::EuclideanData;
using euclid::euclidean_data;

namespace {

constexpr double kPi = std::numbers::pi;

EuclideanData at(const chart::SurfaceChart& c, double u, double v) {
    const double p[2] = {u, v};
    return euclidean_data(chart::immersion_jet(c, p, 4), c.orientation_flip());
}

chart::SurfaceChart graph_chart(const std::string& name, const std::string& z,
                                double lo = -1.0, double hi = 1.0) {
    const auto params = chart::SurfaceChart::default_params(2);
    std::vector<expr::Expression> comps = {
        expr::parse_expression("u", params),
        expr::parse_expression("v", params),
        expr::parse_expression(z, params),
    };
    return chart::SurfaceChart(name, 2, std::move(comps), {{lo, hi}, {lo, hi}});
}

} // namespace

TEST_SUITE_BEGIN("euclid");

TEST_CASE("unit sphere: K = H = S_II = 1 and h equals g (inward normal)") {
    auto sphere = catalog::make_chart("sphere");
    for (double u : {0.4, 1.1, kPi / 2, 2.6}) {
        for (double v : {0.3, 2.0, 5.1}) {
            EuclideanData ed = at(sphere, u, v);
            CHECK(ed.K.v() == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ed.H_I == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(ed.S_II == doctest::Approx(1.0).epsilon(1e-10));
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    CHECK(ed.h(i, j).v() == doctest::Approx(ed.g(i, j).v()).epsilon(1e-12));
            // inward normal: ξ = -x
            const double p[2] = {u, v};
            auto jet = chart::immersion_jet(sphere, p, 4);
            for (int c = 0; c < 3; ++c)
                CHECK(ed.xi[static_cast<std::size_t>(c)].v() ==
                      doctest::Approx(-jet.entry(0)[static_cast<std::size_t>(c)]).epsilon(1e-12));
        }
    }
}

TEST_CASE("hyperbolic paraboloid: K = -(1 + u^2 + v^2)^-2") {
    auto hp = catalog::make_chart("hyperbolic-paraboloid");
    for (double u : {0.0, 0.5, -0.8}) {
        for (double v : {0.0, -0.4, 0.7}) {
            EuclideanData ed = at(hp, u, v);
            const double expected = -1.0 / std::pow(1.0 + u * u + v * v, 2.0);
            CHECK(ed.K.v() == doctest::Approx(expected).epsilon(1e-13));
        }
    }
}

TEST_CASE("ellipsoid (1,1,2): K = 4 at the pole, closed form elsewhere") {
    // graph chart of the cap around the pole (0,0,2): z = 2 sqrt(1 - u^2 - v^2)
    auto cap = graph_chart("ellipsoid-cap", "2*sqrt(1 - u^2 - v^2)", -0.4, 0.4);
    EuclideanData pole = at(cap, 0.0, 0.0);
    CHECK(pole.K.v() == doctest::Approx(4.0).epsilon(1e-12));

    // closed-form oracle K = (abc)^-2 (x^2/a^4 + y^2/b^4 + z^2/c^4)^-2 on the
    // spherical-coordinate chart
    auto ell = catalog::make_chart("ellipsoid:1,1,2");
    const double a = 1.0, b = 1.0, c = 2.0;
    for (double u : {0.4, 1.0, 2.2}) {
        for (double v : {0.5, 3.9}) {
            const double p[2] = {u, v};
            auto jet = chart::immersion_jet(ell, p, 4);
            const double x = jet.entry(0)[0], y = jet.entry(0)[1], z = jet.entry(0)[2];
            const double expected =
                std::pow(a * b * c, -2.0) *
                std::pow(x * x / std::pow(a, 4) + y * y / std::pow(b, 4) + z * z / std::pow(c, 4),
                         -2.0);
            EuclideanData ed = at(ell, u, v);
            CHECK(ed.K.v() == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("orientation rule: h is positive definite wherever K > 0") {
    for (const char* name : {"sphere", "ellipsoid:1,1,2", "elliptic-paraboloid",
                             "convex-nonquadric"}) {
        auto c = catalog::make_chart(name);
        for (const auto& p : chart::sample_grid(c, chart::GridSpec::uniform(2, 7, 0.1))) {
            EuclideanData ed = euclidean_data(chart::immersion_jet(c, p, 4), c.orientation_flip());
            REQUIRE(ed.K.v() > 0.0);
            CHECK(ed.h(0, 0).v() > 0.0);
            CHECK(ed.det_h.v() > 0.0);  // leading minors positive (n = 2)
        }
    }
}

TEST_CASE("sign of K equals sign of det h") {
    for (const char* name : {"helicoid", "monkey-saddle", "sphere", "convex-nonquadric"}) {
        auto c = catalog::make_chart(name);
        for (const auto& p : chart::sample_grid(c, chart::GridSpec::uniform(2, 5, 0.12))) {
            EuclideanData ed = euclidean_data(chart::immersion_jet(c, p, 4), c.orientation_flip());
            CHECK((ed.K.v() > 0) == (ed.det_h.v() > 0));
        }
    }
}

TEST_CASE("S_II agrees with the Brioschi route on II") {
    for (const char* name : {"sphere", "ellipsoid:1,1,2", "elliptic-paraboloid",
                             "hyperbolic-paraboloid", "helicoid", "monkey-saddle",
                             "convex-nonquadric"}) {
        auto c = catalog::make_chart(name);
        for (const auto& p : chart::sample_grid(c, chart::GridSpec::uniform(2, 7, 0.1))) {
            EuclideanData ed = euclidean_data(chart::immersion_jet(c, p, 4), c.orientation_flip());
            const double brioschi = testutil::brioschi(ed.h);
            CHECK(testutil::rel_diff(ed.S_II, brioschi) < 1e-7);
        }
    }
}

TEST_CASE("Beltrami operators on the unit sphere reproduce harmonics of z") {
    auto sphere = catalog::make_chart("sphere");
    for (double u : {0.5, 1.2, 2.0}) {
        for (double v : {0.0, 1.0, 4.0}) {
            const double p[2] = {u, v};
            auto jet = chart::immersion_jet(sphere, p, 4);
            EuclideanData ed = euclidean_data(jet, false);
            // f = z = cos θ as a D2 scalar
            D2 f(2, std::cos(u));
            f.set_d(0, -std::sin(u));
            f.set_dd(0, 0, -std::cos(u));
            const double z = std::cos(u);
            double df[2] = {f.d(0), f.d(1)};
            CHECK(euclid::beltrami_first_II(ed, {df, 2}, {df, 2}) ==
                  doctest::Approx(1.0 - z * z).epsilon(1e-11));
            CHECK(euclid::beltrami_second_II(ed, f) == doctest::Approx(-2.0 * z).epsilon(1e-10));
        }
    }
}

TEST_CASE("first Beltrami operator is bilinear, second is linear") {
    auto c = catalog::make_chart("convex-nonquadric");
    const double p[2] = {0.35, -0.22};
    EuclideanData ed = at(c, p[0], p[1]);
    D2 f(2, 0.8);
    f.set_d(0, 0.3);
    f.set_d(1, -1.1);
    f.set_dd(0, 0, 0.5);
    f.set_dd(0, 1, -0.2);
    f.set_dd(1, 1, 0.9);
    D2 g(2, -0.4);
    g.set_d(0, 1.2);
    g.set_d(1, 0.7);
    g.set_dd(0, 0, -0.6);
    g.set_dd(0, 1, 0.25);
    g.set_dd(1, 1, 0.1);
    double df[2] = {f.d(0), f.d(1)}, dg[2] = {g.d(0), g.d(1)};
    double df2[2] = {2 * f.d(0), 2 * f.d(1)};
    CHECK(euclid::beltrami_first_II(ed, {df2, 2}, {dg, 2}) ==
          doctest::Approx(2.0 * euclid::beltrami_first_II(ed, {df, 2}, {dg, 2})).epsilon(1e-14));
    CHECK(euclid::beltrami_first_II(ed, {df, 2}, {dg, 2}) ==
          doctest::Approx(euclid::beltrami_first_II(ed, {dg, 2}, {df, 2})).epsilon(1e-14));
    CHECK(euclid::beltrami_second_II(ed, f + g) ==
          doctest::Approx(euclid::beltrami_second_II(ed, f) + euclid::beltrami_second_II(ed, g))
              .epsilon(1e-13));
    // constants are annihilated
    CHECK(euclid::beltrami_second_II(ed, D2(2, 3.7)) == 0.0);
    double zero[2] = {0.0, 0.0};
    CHECK(euclid::beltrami_first_II(ed, {zero, 2}, {dg, 2}) == 0.0);
}

TEST_CASE("Beltrami operators match pure finite-difference evaluation") {
    auto ell = catalog::make_chart("ellipsoid:1,1,2");
    // f = ln q_aff = (1/4) ln |K|, a genuinely curved scalar field
    testutil::ScalarField f = [](const euclid::EuclideanData& ed, std::span<const double>) {
        return 0.25 * std::log(std::abs(ed.K.v()));
    };
    for (double u : {0.8, 1.5, 2.1}) {
        for (double v : {0.9, 4.2}) {
            const double p[2] = {u, v};
            auto jet = chart::immersion_jet(ell, p, 4);
            EuclideanData ed = euclidean_data(jet, false);
            const D2 ln_qaff = (1.0 / 4.0) * log_abs(ed.K);
            double d[2] = {ln_qaff.d(0), ln_qaff.d(1)};
            const double exact_grad = euclid::beltrami_first_II(ed, {d, 2}, {d, 2});
            const double exact_lap = euclid::beltrami_second_II(ed, ln_qaff);
            const double fd_grad = testutil::fd_beltrami_first(ell, f, p, 1e-4);
            const double fd_lap = testutil::fd_beltrami_second(ell, f, p, 1e-4);
            CHECK(testutil::rel_diff(exact_grad, fd_grad) < 1e-5);
            CHECK(testutil::rel_diff(exact_lap, fd_lap) < 1e-5);
        }
    }
}

TEST_CASE("degenerate data is rejected") {
    // rank-deficient immersion
    const auto params = chart::SurfaceChart::default_params(2);
    std::vector<expr::Expression> comps = {
        expr::parse_expression("u", params),
        expr::parse_expression("u", params),
        expr::parse_expression("u", params),
    };
    chart::SurfaceChart degenerate("degenerate", 2, std::move(comps), {{0.0, 1.0}, {0.0, 1.0}});
    const double p[2] = {0.5, 0.5};
    CHECK_THROWS_AS(euclidean_data(chart::immersion_jet(degenerate, p, 4), false), GeometryError);

    // flat plane: K vanishes identically
    auto flat = graph_chart("plane", "u + v");
    CHECK_THROWS_AS(at(flat, 0.3, 0.3), GeometryError);
}

TEST_SUITE_END();
