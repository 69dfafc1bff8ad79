#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "relgeo/chart.hpp"
#include "relgeo/relative.hpp"

namespace relgeo::quad {

// Closed surface of positive Gaussian curvature covered by one spherical
// chart up to a measure-zero set; χ is metadata (all built-ins are
// sphere-type).
struct OvaloidAtlas {
    chart::SurfaceChart chart;
    double euler_characteristic = 2.0;
    double pole_margin = 1e-6;  // nodes must keep this distance from the poles
    std::string name;
};

// "sphere" or "ellipsoid:a,b,c"
OvaloidAtlas make_atlas(std::string_view name);

// Gauss-Legendre product rule on the open (θ, φ) box; endpoint nodes never
// occur, so the poles are excluded by construction.
struct QuadratureRule {
    std::vector<double> theta_nodes, theta_weights;
    std::vector<double> phi_nodes, phi_weights;

    static QuadratureRule gauss_legendre(const OvaloidAtlas& atlas, int n_theta, int n_phi);
    std::size_t size() const { return theta_nodes.size() * phi_nodes.size(); }
};

// Gauss-Legendre nodes/weights on [a, b] (exposed for rule sanity tests)
void gauss_legendre_rule(int m, double a, double b, std::vector<double>& nodes,
                         std::vector<double>& weights);

// area element of the metric II: sqrt(det h); requires definite II
double area_element_II(const euclid::EuclideanData& ed);

// ∑ w f(p) sqrt(det h)(p), pairwise-summed in fixed node order
double integrate_scalar(const OvaloidAtlas& atlas, const chart::Normalization& norm,
                        const QuadratureRule& rule,
                        const std::function<double(const relative::InvariantBundle&)>& f);

struct EulerIntegralResult {
    double value = 0.0;      // ∬ S/q dO_II
    double target = 0.0;     // 2πχ
    double deviation = 0.0;  // |value - target| / target
    double corollary = 0.0;  // ∬ S_aff/q_aff dO_II
};

EulerIntegralResult euler_characteristic_integral(const OvaloidAtlas& atlas,
                                                  const chart::Normalization& norm,
                                                  const QuadratureRule& rule);

struct MeanDefectResult {
    double value = 0.0;  // ∬ (H/q - H_aff/q_aff) dO_II
    double area = 0.0;   // ∬ dO_II
};

MeanDefectResult mean_curvature_defect_integral(const OvaloidAtlas& atlas,
                                                const chart::Normalization& norm,
                                                const QuadratureRule& rule);

struct SignScanResult {
    double min_value = 0.0;  // of S/q - S_aff/q_aff over nodes
    double max_value = 0.0;
    bool sign_change = false;
    double max_eq24_residual = 0.0;  // node-wise agreement with (1/2)Δ^II ln φ
};

SignScanResult sign_change_scan(const OvaloidAtlas& atlas, const chart::Normalization& norm,
                                const QuadratureRule& rule);

} // namespace relgeo::quad
