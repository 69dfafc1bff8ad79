#pragma once

#include <array>
#include <span>

#include "relgeo/chart.hpp"
#include "relgeo/dscalar.hpp"
#include "relgeo/riemann.hpp"
#include "relgeo/smallmat.hpp"

namespace relgeo::euclid {

// All Euclidean-normalization data at one point: fundamental forms with two
// derivative orders, unit normal, Gauss-Kronecker and mean curvature, and the
// scalar curvature of II. The forms keep their D2 payload so downstream
// quantities (relative metric, Christoffels of II, Beltrami operators) get
// exact derivatives.
struct EuclideanData {
    int n = 0;
    MatD2 g;          // first fundamental form
    MatD2 h;          // second fundamental form (orientation rule applied)
    MatD2 h_inv;
    MatD g_inv;
    std::array<D2, kMaxAmbient> xi{};  // unit normal
    D2 det_g, det_h;
    D2 K;             // Gaussian curvature det h / det g
    double H_I = 0.0;  // Euclidean mean curvature, trace(g^-1 h)/n
    double S_II = 0.0; // normalized scalar curvature of II: R(h)/(n(n-1))
    Christoffels gamma_II;
    double sigma = 1.0;  // sign applied to the raw cross-product normal
};

// Orientation rule: if II is definite the normal is flipped so that h is
// positive definite; otherwise the parameter-order orientation (optionally
// flipped by the chart flag) is kept.
EuclideanData euclidean_data(const chart::Jet& jet, bool orientation_flip);

// first Beltrami operator of II:  ∇^II(f,g) = h^(ij) f_i g_j
double beltrami_first_II(const EuclideanData& ed, std::span<const double> df,
                         std::span<const double> dg);

// second Beltrami operator of II: Δ^II f = |det h|^(-1/2) ∂_i(|det h|^(1/2) h^(ij) ∂_j f)
double beltrami_second_II(const EuclideanData& ed, const D2& f);

} // namespace relgeo::euclid
