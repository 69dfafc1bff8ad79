#include <doctest.h>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "relgeo/quad.hpp"

using namespace relgeo;
using quad::OvaloidAtlas;
using quad::QuadratureRule;

namespace {

constexpr double kPi = std::numbers::pi;

chart::Normalization seeded(const OvaloidAtlas& atlas) { return testutil::seeded_custom(atlas.chart); }

} // namespace

TEST_SUITE_BEGIN("quad");

TEST_CASE("Gauss-Legendre rules: positive weights summing to the box measure") {
    std::vector<double> nodes, weights;
    quad::gauss_legendre_rule(64, 0.0, kPi, nodes, weights);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CHECK(weights[i] > 0.0);
        CHECK(nodes[i] > 0.0);
        CHECK(nodes[i] < kPi);
        if (i) CHECK(nodes[i] > nodes[i - 1]);
        sum += weights[i];
    }
    CHECK(sum == doctest::Approx(kPi).epsilon(1e-14));

    // 4-node rule integrates degree-7 polynomials exactly
    quad::gauss_legendre_rule(4, 0.0, 1.0, nodes, weights);
    double p7 = 0.0;
    for (std::size_t i = 0; i < 4; ++i) p7 += weights[i] * std::pow(nodes[i], 7);
    CHECK(p7 == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
}

TEST_CASE("area element of II on the unit sphere is sin(theta)") {
    OvaloidAtlas atlas = quad::make_atlas("sphere");
    for (double theta : {0.3, kPi / 2, 2.5}) {
        const double p[2] = {theta, 1.0};
        auto jet = chart::immersion_jet(atlas.chart, p, 4);
        auto ed = euclid::euclidean_data(jet, false);
        CHECK(quad::area_element_II(ed) == doctest::Approx(std::sin(theta)).epsilon(1e-12));
    }
    const double eq[2] = {kPi / 2, 1.0};
    auto ed = euclid::euclidean_data(chart::immersion_jet(atlas.chart, eq, 4), false);
    CHECK(quad::area_element_II(ed) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("the area element rejects indefinite II") {
    auto hp = catalog::make_chart("hyperbolic-paraboloid");
    const double p[2] = {0.3, 0.2};
    auto ed = euclid::euclidean_data(chart::immersion_jet(hp, p, 4), false);
    CHECK_THROWS_AS(quad::area_element_II(ed), GeometryError);
}

TEST_CASE("total II-area of the unit sphere is 4*pi") {
    OvaloidAtlas atlas = quad::make_atlas("sphere");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);
    const double area = quad::integrate_scalar(atlas, chart::Normalization::euclidean(), rule,
                                               [](const relative::InvariantBundle&) { return 1.0; });
    CHECK(std::abs(area - 4.0 * kPi) < 1e-8);

    const double zero = quad::integrate_scalar(atlas, chart::Normalization::euclidean(), rule,
                                               [](const relative::InvariantBundle&) { return 0.0; });
    CHECK(zero == 0.0);
}

TEST_CASE("II-area scales linearly with the radius, ordinary area quadratically") {
    OvaloidAtlas unit = quad::make_atlas("sphere");
    OvaloidAtlas scaled = quad::make_atlas("ellipsoid:3,3,3");
    QuadratureRule r1 = QuadratureRule::gauss_legendre(unit, 32, 64);
    QuadratureRule r3 = QuadratureRule::gauss_legendre(scaled, 32, 64);
    auto one = [](const relative::InvariantBundle&) { return 1.0; };
    const double a1 = quad::integrate_scalar(unit, chart::Normalization::euclidean(), r1, one);
    const double a3 = quad::integrate_scalar(scaled, chart::Normalization::euclidean(), r3, one);
    CHECK(a3 == doctest::Approx(3.0 * a1).epsilon(1e-10));
    // ordinary area via dO = sqrt(det g)/sqrt(det h) dO_II
    auto euclidean_area = [](const relative::InvariantBundle& b) {
        return std::sqrt(b.ed.det_g.v() / b.ed.det_h.v());
    };
    const double o3 =
        quad::integrate_scalar(scaled, chart::Normalization::euclidean(), r3, euclidean_area);
    CHECK(o3 == doctest::Approx(9.0 * 4.0 * kPi).epsilon(1e-10));
}

TEST_CASE("Gauss-Bonnet for the metric II on the ellipsoid") {
    OvaloidAtlas atlas = quad::make_atlas("ellipsoid:1,1,2");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);
    const double v = quad::integrate_scalar(atlas, chart::Normalization::euclidean(), rule,
                                            [](const relative::InvariantBundle& b) { return b.ed.S_II; });
    CHECK(std::abs(v - 4.0 * kPi) < 1e-4 * 4.0 * kPi);
}

TEST_CASE("Euler-characteristic integral equals 2*pi*chi for every normalization kind") {
    for (const char* name : {"sphere", "ellipsoid:1,1,2"}) {
        OvaloidAtlas atlas = quad::make_atlas(name);
        QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);
        std::vector<chart::Normalization> norms = {
            chart::Normalization::euclidean(),
            chart::Normalization::equiaffine(),
            chart::Normalization::scaled_equiaffine(2.0),
            seeded(atlas),
        };
        const double s_ii = quad::integrate_scalar(
            atlas, chart::Normalization::euclidean(), rule,
            [](const relative::InvariantBundle& b) { return b.ed.S_II; });
        for (const auto& norm : norms) {
            auto r = quad::euler_characteristic_integral(atlas, norm, rule);
            CHECK(r.target == doctest::Approx(4.0 * kPi).epsilon(1e-15));
            CHECK(r.deviation < 1e-4);
            CHECK(std::abs(r.corollary - r.target) / r.target < 1e-4);
            // the chain ∬S/q = ∬S_aff/q_aff = ∬S_II agrees pairwise
            CHECK(std::abs(r.value - r.corollary) / r.target < 1e-4);
            CHECK(std::abs(r.value - s_ii) / r.target < 1e-4);
        }
    }
}

TEST_CASE("unit sphere with Euclidean normalization integrates exactly to 4*pi") {
    OvaloidAtlas atlas = quad::make_atlas("sphere");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);
    auto r = quad::euler_characteristic_integral(atlas, chart::Normalization::euclidean(), rule);
    CHECK(std::abs(r.value - 4.0 * kPi) < 1e-8);
}

TEST_CASE("mean-curvature defect: zero for proportional, positive for seeded normalizations") {
    OvaloidAtlas atlas = quad::make_atlas("ellipsoid:1,1,2");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);

    auto r_aff = quad::mean_curvature_defect_integral(atlas, chart::Normalization::equiaffine(), rule);
    CHECK(std::abs(r_aff.value) < 1e-8);

    auto r_scaled = quad::mean_curvature_defect_integral(
        atlas, chart::Normalization::scaled_equiaffine(2.0), rule);
    CHECK(std::abs(r_scaled.value) < 1e-7);

    auto r_cus = quad::mean_curvature_defect_integral(atlas, seeded(atlas), rule);
    CHECK(r_cus.value > 1e-4);
    CHECK(r_cus.value >= -1e-8 * r_cus.area);
}

TEST_CASE("sign scan: constant sign for proportional, both signs for seeded normalizations") {
    OvaloidAtlas atlas = quad::make_atlas("ellipsoid:1,1,2");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 32, 64);

    auto r_scaled = quad::sign_change_scan(atlas, chart::Normalization::scaled_equiaffine(3.0), rule);
    CHECK_FALSE(r_scaled.sign_change);
    CHECK(std::abs(r_scaled.min_value) < 1e-9);
    CHECK(std::abs(r_scaled.max_value) < 1e-9);

    auto r_cus = quad::sign_change_scan(atlas, seeded(atlas), rule);
    CHECK(r_cus.sign_change);
    CHECK(r_cus.min_value < 0.0);
    CHECK(r_cus.max_value > 0.0);
    CHECK(r_cus.max_eq24_residual < 1e-6);
}

TEST_CASE("doubling the node counts moves the Euler integral by less than 1e-6 relative") {
    OvaloidAtlas atlas = quad::make_atlas("ellipsoid:1,1,2");
    auto norm = seeded(atlas);
    QuadratureRule coarse = QuadratureRule::gauss_legendre(atlas, 32, 64);
    QuadratureRule fine = QuadratureRule::gauss_legendre(atlas, 64, 128);
    auto rc = quad::euler_characteristic_integral(atlas, norm, coarse);
    auto rf = quad::euler_characteristic_integral(atlas, norm, fine);
    CHECK(std::abs(rc.value - rf.value) / std::abs(rf.value) < 1e-6);
}

TEST_CASE("the dO_II integral of the Beltrami Laplacian of ln(phi) vanishes") {
    OvaloidAtlas atlas = quad::make_atlas("ellipsoid:1,1,2");
    QuadratureRule rule = QuadratureRule::gauss_legendre(atlas, 64, 128);
    std::vector<chart::Normalization> norms = {
        chart::Normalization::euclidean(),
        chart::Normalization::scaled_equiaffine(2.0),
        seeded(atlas),
    };
    for (const auto& norm : norms) {
        const double v = quad::integrate_scalar(atlas, norm, rule,
                                                [](const relative::InvariantBundle& b) {
                                                    return euclid::beltrami_second_II(
                                                        b.ed, b.main.rd.ln_phi);
                                                });
        CHECK(std::abs(v) < 1e-6);
    }
}

TEST_CASE("only true ovaloid atlases are accepted") {
    CHECK_THROWS_AS(quad::make_atlas("helicoid"), GeometryError);
    CHECK_THROWS_AS(quad::make_atlas("no-such-surface"), GeometryError);
    OvaloidAtlas atlas = quad::make_atlas("sphere");
    CHECK(atlas.euler_characteristic == 2.0);
}

TEST_SUITE_END();
