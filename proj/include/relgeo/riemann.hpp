#pragma once

#include "relgeo/dscalar.hpp"
#include "relgeo/smallmat.hpp"

namespace relgeo {

// Christoffel symbols of the second kind for a (pseudo-)metric carrying
// order-2 derivative data, together with their first partials.
struct Christoffels {
    int n = 0;
    // gamma[a][i][j] = Γ^a_{ij},  dgamma[a][i][j][l] = ∂_l Γ^a_{ij}
    double gamma[kMaxDim][kMaxDim][kMaxDim] = {};
    double dgamma[kMaxDim][kMaxDim][kMaxDim][kMaxDim] = {};
};

Christoffels christoffel_symbols(const MatD2& metric);

// scalar curvature R of the metric; works in either signature as long as
// the metric is invertible
double scalar_curvature(const MatD2& metric);

} // namespace relgeo
