#include "relgeo/euclid.hpp"

#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo::euclid {

namespace {

// generalized cross product of the n first-partial vectors: component c is
// the signed n x n minor of the Jacobian with column c removed
std::array<D2, kMaxAmbient> cross_product(const chart::Jet& jet) {
    const int n = jet.dim();
    std::array<D2, kMaxAmbient> N;
    for (int c = 0; c <= n; ++c) {
        MatD2 minor;
        minor.k = n;
        for (int r = 0; r < n; ++r) {
            int col = 0;
            for (int q = 0; q <= n; ++q) {
                if (q == c) continue;
                int dirs[1] = {r};
                minor(r, col) = jet.d2(std::span<const int>(dirs, 1), q);
                ++col;
            }
        }
        D2 dm = det(minor, D2(n, 1.0));
        N[static_cast<std::size_t>(c)] = (c % 2 == 0) ? dm : -dm;
    }
    return N;
}

} // namespace

EuclideanData euclidean_data(const chart::Jet& jet, bool orientation_flip) {
    if (jet.order() < 4) throw GeometryError("euclidean_data needs an order-4 jet");
    const int n = jet.dim();
    EuclideanData ed;
    ed.n = n;

    // first fundamental form
    ed.g.k = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            D2 s(n, 0.0);
            for (int c = 0; c <= n; ++c) s += jet.d2({i}, c) * jet.d2({j}, c);
            ed.g(i, j) = s;
            ed.g(j, i) = s;
        }
    }
    ed.det_g = det(ed.g, D2(n, 1.0));

    // immersion condition, scaled by the Hadamard bound of det g
    double scale = 1.0;
    for (int i = 0; i < n; ++i) scale *= ed.g(i, i).v();
    if (!(ed.det_g.v() > 1e-12 * std::max(1.0, scale)))
        throw GeometryError("degenerate metric: det g below threshold");

    const std::array<D2, kMaxAmbient> N = cross_product(jet);
    D2 norm2(n, 0.0);
    for (int c = 0; c <= n; ++c) norm2 += N[static_cast<std::size_t>(c)] * N[static_cast<std::size_t>(c)];
    const D2 inv_norm = inverse(sqrt(norm2));

    // second fundamental form for sigma = +1
    ed.h.k = n;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            D2 s(n, 0.0);
            for (int c = 0; c <= n; ++c) s += N[static_cast<std::size_t>(c)] * jet.d2({i, j}, c);
            s = s * inv_norm;
            ed.h(i, j) = s;
            ed.h(j, i) = s;
        }
    }

    // orientation rule
    MatD hv = values(ed.h);
    MatD neg = hv;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) neg(i, j) = -neg(i, j);
    if (positive_definite(hv)) {
        ed.sigma = 1.0;
    } else if (positive_definite(neg)) {
        ed.sigma = -1.0;
    } else {
        ed.sigma = orientation_flip ? -1.0 : 1.0;
    }
    if (ed.sigma < 0.0) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ed.h(i, j) = -ed.h(i, j);
    }
    for (int c = 0; c <= n; ++c)
        ed.xi[static_cast<std::size_t>(c)] = ed.sigma * (N[static_cast<std::size_t>(c)] * inv_norm);

    ed.det_h = det(ed.h, D2(n, 1.0));
    ed.K = ed.det_h / ed.det_g;
    if (!(std::abs(ed.K.v()) > 1e-12))
        throw GeometryError("vanishing Gaussian curvature at sample point");

    ed.h_inv = inverse(ed.h, D2(n, 1.0));
    ed.g_inv = inverse(values(ed.g));

    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += ed.g_inv(i, j) * ed.h(j, i).v();
    ed.H_I = tr / n;

    ed.S_II = scalar_curvature(ed.h) / (n * (n - 1));
    ed.gamma_II = christoffel_symbols(ed.h);
    return ed;
}

double beltrami_first_II(const EuclideanData& ed, std::span<const double> df,
                         std::span<const double> dg) {
    double s = 0.0;
    for (int i = 0; i < ed.n; ++i)
        for (int j = 0; j < ed.n; ++j)
            s += ed.h_inv(i, j).v() * df[static_cast<std::size_t>(i)] * dg[static_cast<std::size_t>(j)];
    return s;
}

double beltrami_second_II(const EuclideanData& ed, const D2& f) {
    // Δ^II f = h^(ij) f_ij + (∂_i h^(ij)) f_j + (1/2)(∂_i ln|det h|) h^(ij) f_j
    double s = 0.0;
    for (int i = 0; i < ed.n; ++i) {
        for (int j = 0; j < ed.n; ++j) {
            s += ed.h_inv(i, j).v() * f.dd(i, j);
            s += ed.h_inv(i, j).d(i) * f.d(j);
            s += 0.5 * (ed.det_h.d(i) / ed.det_h.v()) * ed.h_inv(i, j).v() * f.d(j);
        }
    }
    return s;
}

} // namespace relgeo::euclid
