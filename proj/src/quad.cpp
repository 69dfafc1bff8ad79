#include "relgeo/quad.hpp"

#include <cmath>
#include <numbers>

#include "relgeo/catalog.hpp"
#include "relgeo/errors.hpp"
#include "relgeo/parallel.hpp"

namespace relgeo::quad {

namespace {

constexpr double kPi = std::numbers::pi;

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> node_values(const OvaloidAtlas& atlas, const chart::Normalization& norm,
                                const QuadratureRule& rule,
                                const std::function<double(const relative::InvariantBundle&)>& f,
                                bool weighted_by_area_element) {
    const relative::BundleEvaluator eval(atlas.chart, norm);
    const std::size_t nt = rule.theta_nodes.size(), np = rule.phi_nodes.size();
    std::vector<double> vals(nt * np);
    parallel_for(vals.size(), [&](std::size_t idx) {
        const std::size_t i = idx / np, j = idx % np;
        const double p[2] = {rule.theta_nodes[i], rule.phi_nodes[j]};
        const relative::InvariantBundle b = eval.at(p);
        double v = f(b);
        if (weighted_by_area_element)
            v *= rule.theta_weights[i] * rule.phi_weights[j] * area_element_II(b.ed);
        vals[idx] = v;
    });
    return vals;
}

} // namespace

OvaloidAtlas make_atlas(std::string_view name) {
    OvaloidAtlas atlas{catalog::make_chart(name), 2.0, 1e-6, std::string(name)};
    if (atlas.chart.dim() != 2 || atlas.chart.domain()[0].lo != 0.0 ||
        std::abs(atlas.chart.domain()[0].hi - kPi) > 1e-15)
        throw GeometryError("'" + std::string(name) + "' is not a built-in ovaloid atlas");
    return atlas;
}

void gauss_legendre_rule(int m, double a, double b, std::vector<double>& nodes,
                         std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(m), 0.0);
    weights.assign(static_cast<std::size_t>(m), 0.0);
    // Newton iteration on P_m, symmetric roots paired
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) {
                // one final refresh of dp at the converged node
                p0 = 1.0;
                p1 = x;
                for (int k = 2; k <= m; ++k) {
                    double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m * (x * p1 - p0) / (x * x - 1.0);
                break;
            }
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const double mid = 0.5 * (a + b), halfw = 0.5 * (b - a);
        nodes[static_cast<std::size_t>(i)] = mid - halfw * x;
        nodes[static_cast<std::size_t>(m - 1 - i)] = mid + halfw * x;
        weights[static_cast<std::size_t>(i)] = w * halfw;
        weights[static_cast<std::size_t>(m - 1 - i)] = w * halfw;
    }
}

QuadratureRule QuadratureRule::gauss_legendre(const OvaloidAtlas& atlas, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw GeometryError("quadrature rule needs at least 2 nodes per axis");
    QuadratureRule r;
    const auto& dom = atlas.chart.domain();
    gauss_legendre_rule(n_theta, dom[0].lo, dom[0].hi, r.theta_nodes, r.theta_weights);
    gauss_legendre_rule(n_phi, dom[1].lo, dom[1].hi, r.phi_nodes, r.phi_weights);
    for (double t : r.theta_nodes)
        if (t - dom[0].lo < atlas.pole_margin || dom[0].hi - t < atlas.pole_margin)
            throw GeometryError("quadrature node violates the pole-exclusion margin");
    return r;
}

double area_element_II(const euclid::EuclideanData& ed) {
    if (!(ed.det_h.v() > 0.0))
        throw GeometryError("area element of II needs a definite second fundamental form");
    return std::sqrt(ed.det_h.v());
}

double integrate_scalar(const OvaloidAtlas& atlas, const chart::Normalization& norm,
                        const QuadratureRule& rule,
                        const std::function<double(const relative::InvariantBundle&)>& f) {
    const std::vector<double> vals = node_values(atlas, norm, rule, f, true);
    return pairwise_sum(vals);
}

EulerIntegralResult euler_characteristic_integral(const OvaloidAtlas& atlas,
                                                  const chart::Normalization& norm,
                                                  const QuadratureRule& rule) {
    EulerIntegralResult r;
    r.value = integrate_scalar(atlas, norm, rule,
                               [](const relative::InvariantBundle& b) { return b.S() / b.q(); });
    r.corollary = integrate_scalar(atlas, norm, rule, [](const relative::InvariantBundle& b) {
        return b.S_aff / b.q_aff();
    });
    r.target = 2.0 * kPi * atlas.euler_characteristic;
    r.deviation = std::abs(r.value - r.target) / r.target;
    return r;
}

MeanDefectResult mean_curvature_defect_integral(const OvaloidAtlas& atlas,
                                                const chart::Normalization& norm,
                                                const QuadratureRule& rule) {
    MeanDefectResult r;
    r.value = integrate_scalar(atlas, norm, rule, [](const relative::InvariantBundle& b) {
        return b.H() / b.q() - b.H_aff() / b.q_aff();
    });
    r.area = integrate_scalar(atlas, norm, rule, [](const relative::InvariantBundle&) { return 1.0; });
    return r;
}

SignScanResult sign_change_scan(const OvaloidAtlas& atlas, const chart::Normalization& norm,
                                const QuadratureRule& rule) {
    // S/q - S_aff/q_aff equals (1/2)Δ^II ln φ pointwise; its dO_II integral
    // vanishes on a closed surface, so a nonconstant φ must produce both signs
    const std::vector<double> vals =
        node_values(atlas, norm, rule, [](const relative::InvariantBundle& b) {
            return b.S() / b.q() - b.S_aff / b.q_aff();
        }, false);
    const std::vector<double> eq24 =
        node_values(atlas, norm, rule, [](const relative::InvariantBundle& b) {
            const double rhs = 0.5 * euclid::beltrami_second_II(b.ed, b.main.rd.ln_phi);
            const double lhs = b.S() / b.q() - b.S_aff / b.q_aff();
            const double scale = std::max(std::abs(lhs), std::abs(rhs));
            return std::abs(lhs - rhs) / (1.0 + scale);
        }, false);

    SignScanResult r;
    r.min_value = vals[0];
    r.max_value = vals[0];
    for (double v : vals) {
        r.min_value = std::min(r.min_value, v);
        r.max_value = std::max(r.max_value, v);
    }
    for (double e : eq24) r.max_eq24_residual = std::max(r.max_eq24_residual, e);
    const double t = 1e-9 * std::max(1.0, std::max(std::abs(r.min_value), std::abs(r.max_value)));
    r.sign_change = r.min_value < -t && r.max_value > t;
    return r;
}

} // namespace relgeo::quad
