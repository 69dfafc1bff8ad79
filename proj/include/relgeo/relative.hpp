#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "relgeo/chart.hpp"
#include "relgeo/euclid.hpp"

namespace relgeo::relative {

// Support function with exact order-2 derivative data, ready to evaluate at
// chart points (custom expressions are differentiated symbolically once).
class PreparedNormalization {
public:
    PreparedNormalization() = default;
    PreparedNormalization(chart::Normalization norm, const chart::SurfaceChart& chart);

    const chart::Normalization& normalization() const { return norm_; }

    // support function at the point given the Euclidean data there
    D2 support(const euclid::EuclideanData& ed, std::span<const double> p) const;

private:
    D2 factor_at(int n, std::span<const double> p) const;

    chart::Normalization norm_;
    std::vector<expr::Expression> derivs_;  // value, gradient, upper-tri Hessian
};

// Relative normalization frame of §1: support function, Tchebychev function,
// covector, relative metric, and the relative normal with its derivatives.
struct RelativeData {
    int n = 0;
    D2 q;        // support function, positive
    D2 q_aff;    // |K_I|^(1/(n+2))
    D2 ln_phi;   // ((n+2)/2n)(ln q - ln q_aff)
    double phi = 1.0;
    std::array<double, kMaxAmbient> X{};  // covector q^-1 ξ
    MatD2 G;     // relative metric q^-1 h
    MatD2 G_inv;
    Christoffels gamma_G;
    std::array<double, kMaxAmbient> ybar{};                       // relative normal
    std::array<std::array<double, kMaxAmbient>, kMaxDim> dybar{}; // ∂_i ybar
    double max_frame_residual = 0.0;  // worst of <X,x_i>=0, <X,ybar>=1
};

RelativeData relative_frame(const euclid::EuclideanData& ed, const PreparedNormalization& norm,
                            const chart::Jet& jet);

// fully symmetric Darboux tensor A_jkl
struct DarbouxTensor {
    int n = 0;
    double a[kMaxDim][kMaxDim][kMaxDim] = {};
    double max_asymmetry = 0.0;  // sanity: permuted assemblies must agree
};

DarbouxTensor darboux_tensor(const RelativeData& rd, const chart::Jet& jet);

struct TchebychevResult {
    std::array<double, kMaxDim> T{};           // trace route (1/n) A_i^{im}
    std::array<double, kMaxDim> T_gradient{};  // G^(im)(ln φ)_m
    double norm_G = 0.0;                       // G_ij T^i T^j
    double route_discrepancy = 0.0;
};

TchebychevResult tchebychev(const RelativeData& rd, const DarbouxTensor& A);

struct PickResult {
    double J = 0.0;      // contraction route A_jkl A^jkl / (n(n-1))
    double J_eq4 = 0.0;  // Beltrami route
    double route_discrepancy = 0.0;
};

PickResult pick_invariant(const RelativeData& rd, const DarbouxTensor& A,
                          const euclid::EuclideanData& ed);

struct ShapeResult {
    double B[kMaxDim][kMaxDim] = {};  // ybar_i = -B_i^j x_j
    double H = 0.0;                   // trace route
    double H_eq6 = 0.0;               // Beltrami route
    double route_discrepancy = 0.0;
    double max_tangency_residual = 0.0;  // <ξ, ybar_i> should vanish
};

ShapeResult relative_shape(const RelativeData& rd, const chart::Jet& jet,
                           const euclid::EuclideanData& ed);

// normalized scalar curvature S = R(G)/(n(n-1))
double relative_scalar_curvature(const RelativeData& rd);

// one normalization's full invariant set at a point
struct NormalizedInvariants {
    RelativeData rd;
    DarbouxTensor A;
    TchebychevResult tcheb;
    PickResult pick;
    ShapeResult shape;
    double S = 0.0;
};

// Per-point record of every §§1-2 quantity under the requested
// normalization, plus the equiaffine and Euclidean reference stacks.
struct InvariantBundle {
    std::vector<double> point;
    euclid::EuclideanData ed;
    NormalizedInvariants main;
    NormalizedInvariants aff;
    double J_euk = 0.0;
    double S_aff = 0.0;  // inner equiaffine curvature J_aff + H_aff

    double J() const { return main.pick.J; }
    double H() const { return main.shape.H; }
    double S() const { return main.S; }
    double norm_T() const { return main.tcheb.norm_G; }
    double q() const { return main.rd.q.v(); }
    double q_aff() const { return main.rd.q_aff.v(); }
    double phi() const { return main.rd.phi; }
    double J_aff() const { return aff.pick.J; }
    double H_aff() const { return aff.shape.H; }
};

// Chart + normalization bound together with their prepared symbolic tables;
// `at` is pure and safe to call concurrently.
class BundleEvaluator {
public:
    BundleEvaluator(const chart::SurfaceChart& chart, chart::Normalization norm);

    const chart::SurfaceChart& chart() const { return *chart_; }
    const chart::Normalization& normalization() const { return main_.normalization(); }

    InvariantBundle at(std::span<const double> p) const;

private:
    const chart::SurfaceChart* chart_;
    PreparedNormalization main_, aff_, euk_;
};

} // namespace relgeo::relative
