#pragma once

// shared test oracles, independent of the library's curvature assembly paths

#include <cmath>
#include <functional>

#include "relgeo/catalog.hpp"
#include "relgeo/euclid.hpp"
#include "relgeo/relative.hpp"

namespace testutil {

using relgeo::D2;
using relgeo::MatD2;

// Brioschi formula for the Gauss curvature of a 2-metric E,F,G with exact
// first/second derivatives. Independent of the Riemann-tensor route.
inline double brioschi(const MatD2& m) {
    const D2 &E = m(0, 0), &F = m(0, 1), &G = m(1, 1);
    const double Eu = E.d(0), Ev = E.d(1);
    const double Fu = F.d(0), Fv = F.d(1);
    const double Gu = G.d(0), Gv = G.d(1);
    const double Evv = E.dd(1, 1), Guu = G.dd(0, 0), Fuv = F.dd(0, 1);
    auto det3 = [](double a11, double a12, double a13, double a21, double a22, double a23,
                   double a31, double a32, double a33) {
        return a11 * (a22 * a33 - a23 * a32) - a12 * (a21 * a33 - a23 * a31) +
               a13 * (a21 * a32 - a22 * a31);
    };
    const double m1 = det3(-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev,
                           Fv - 0.5 * Gu, E.v(), F.v(),
                           0.5 * Gv, F.v(), G.v());
    const double m2 = det3(0.0, 0.5 * Ev, 0.5 * Gu,
                           0.5 * Ev, E.v(), F.v(),
                           0.5 * Gu, F.v(), G.v());
    const double disc = E.v() * G.v() - F.v() * F.v();
    return (m1 - m2) / (disc * disc);
}

// pointwise scalar field evaluated through a fresh Euclidean stack
using ScalarField = std::function<double(const relgeo::euclid::EuclideanData&, std::span<const double>)>;

inline double eval_field(const relgeo::chart::SurfaceChart& chart, const ScalarField& f,
                         std::span<const double> p) {
    const auto jet = relgeo::chart::immersion_jet(chart, p, 4);
    const auto ed = relgeo::euclid::euclidean_data(jet, chart.orientation_flip());
    return f(ed, p);
}

// central-difference gradient of a scalar field defined through the stack
inline void fd_gradient(const relgeo::chart::SurfaceChart& chart, const ScalarField& f,
                        std::span<const double> p, double h, double* out) {
    std::vector<double> q(p.begin(), p.end());
    for (int i = 0; i < chart.dim(); ++i) {
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + h;
        const double fp = eval_field(chart, f, q);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] - h;
        const double fm = eval_field(chart, f, q);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
        out[i] = (fp - fm) / (2.0 * h);
    }
}

// ∇^II(f) by pure finite differences: h^(ij) from the stack, gradient by FD
inline double fd_beltrami_first(const relgeo::chart::SurfaceChart& chart, const ScalarField& f,
                                std::span<const double> p, double h) {
    const auto jet = relgeo::chart::immersion_jet(chart, p, 4);
    const auto ed = relgeo::euclid::euclidean_data(jet, chart.orientation_flip());
    double grad[relgeo::kMaxDim];
    fd_gradient(chart, f, p, h, grad);
    double s = 0.0;
    for (int i = 0; i < ed.n; ++i)
        for (int j = 0; j < ed.n; ++j) s += ed.h_inv(i, j).v() * grad[i] * grad[j];
    return s;
}

// Δ^II(f) in divergence form, all derivatives by nested central differences
inline double fd_beltrami_second(const relgeo::chart::SurfaceChart& chart, const ScalarField& f,
                                 std::span<const double> p, double h) {
    const int n = chart.dim();
    auto flux = [&](std::span<const double> q, int i) {
        const auto jet = relgeo::chart::immersion_jet(chart, q, 4);
        const auto ed = relgeo::euclid::euclidean_data(jet, chart.orientation_flip());
        double grad[relgeo::kMaxDim];
        fd_gradient(chart, f, q, h, grad);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += ed.h_inv(i, j).v() * grad[j];
        return std::sqrt(std::abs(ed.det_h.v())) * s;
    };
    std::vector<double> q(p.begin(), p.end());
    double div = 0.0;
    for (int i = 0; i < n; ++i) {
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] + h;
        const double fp = flux(q, i);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)] - h;
        const double fm = flux(q, i);
        q[static_cast<std::size_t>(i)] = p[static_cast<std::size_t>(i)];
        div += (fp - fm) / (2.0 * h);
    }
    const auto jet = relgeo::chart::immersion_jet(chart, p, 4);
    const auto ed = relgeo::euclid::euclidean_data(jet, chart.orientation_flip());
    return div / std::sqrt(std::abs(ed.det_h.v()));
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// the seeded custom normalization used across suites
inline relgeo::chart::Normalization seeded_custom(const relgeo::chart::SurfaceChart& chart) {
    const std::string desc = chart.dim() == 2 ? "qaff*exp(0.1*sin(u)*cos(v))"
                                              : "qaff*exp(0.1*sin(u1)*cos(u2))";
    return relgeo::chart::parse_normalization(desc, chart);
}

} // namespace testutil
