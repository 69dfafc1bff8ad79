#include "relgeo/relative.hpp"

#include <cmath>

#include "relgeo/errors.hpp"

namespace relgeo::relative {

using chart::Normalization;

// ---------------------------------------------------------------------------
// PreparedNormalization
// ---------------------------------------------------------------------------

PreparedNormalization::PreparedNormalization(Normalization norm, const chart::SurfaceChart& chart)
    : norm_(std::move(norm)) {
    if (norm_.kind == Normalization::Kind::Custom || norm_.kind == Normalization::Kind::CustomRelative) {
        const int n = chart.dim();
        const expr::Expression& q = *norm_.q;
        derivs_.push_back(q);
        std::vector<expr::Expression> firsts;
        for (int i = 0; i < n; ++i) firsts.push_back(expr::differentiate(q, i));
        for (const auto& e : firsts) derivs_.push_back(e);
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                derivs_.push_back(expr::differentiate(firsts[static_cast<std::size_t>(i)], j));
    }
}

D2 PreparedNormalization::factor_at(int n, std::span<const double> p) const {
    D2 f(n, expr::evaluate(derivs_[0], p));
    std::size_t idx = 1;
    for (int i = 0; i < n; ++i) f.set_d(i, expr::evaluate(derivs_[idx++], p));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) f.set_dd(i, j, expr::evaluate(derivs_[idx++], p));
    return f;
}

D2 PreparedNormalization::support(const euclid::EuclideanData& ed, std::span<const double> p) const {
    const int n = ed.n;
    const D2 q_aff = pow(abs(ed.K), 1.0 / (n + 2));
    switch (norm_.kind) {
        case Normalization::Kind::Euclidean: return D2(n, 1.0);
        case Normalization::Kind::Equiaffine: return q_aff;
        case Normalization::Kind::ScaledEquiaffine: return norm_.scale * q_aff;
        case Normalization::Kind::Custom: return factor_at(n, p);
        case Normalization::Kind::CustomRelative: return q_aff * factor_at(n, p);
    }
    throw GeometryError("unreachable normalization kind");
}

// ---------------------------------------------------------------------------
// relative frame
// ---------------------------------------------------------------------------

RelativeData relative_frame(const euclid::EuclideanData& ed, const PreparedNormalization& norm,
                            const chart::Jet& jet) {
    const int n = ed.n;
    RelativeData rd;
    rd.n = n;

    rd.q = norm.support(ed, jet.point());
    if (!(rd.q.v() > 0.0)) throw GeometryError("nonpositive support function q");
    rd.q_aff = pow(abs(ed.K), 1.0 / (n + 2));
    rd.ln_phi = (double(n + 2) / double(2 * n)) * (log(rd.q) - log(rd.q_aff));
    rd.phi = std::exp(rd.ln_phi.v());

    const D2 inv_q = inverse(rd.q);
    for (int c = 0; c <= n; ++c)
        rd.X[static_cast<std::size_t>(c)] = ed.xi[static_cast<std::size_t>(c)].v() * inv_q.v();

    rd.G.k = n;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) rd.G(i, j) = ed.h(i, j) * inv_q;
    rd.G_inv = inverse(rd.G, D2(n, 1.0));
    rd.gamma_G = christoffel_symbols(rd.G);

    // Relative normal. Writing ybar = q ξ + t^j x_j, tangency of the
    // derivatives forces 0 = <ξ, ybar_i> = ∂_i<ξ, ybar> - <ξ_i, ybar>
    //                      = q_i + t^j h_ij,
    // so t^j = -h^(jk) q_k and ybar = q ξ - h^(jk) q_k x_j is the unique
    // field with support function q.
    double V[kMaxDim] = {};
    double dV[kMaxDim][kMaxDim] = {};  // dV[i][j] = ∂_i V^j
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            V[j] += ed.h_inv(j, k).v() * rd.q.d(k);
            for (int i = 0; i < n; ++i)
                dV[i][j] += ed.h_inv(j, k).d(i) * rd.q.d(k) + ed.h_inv(j, k).v() * rd.q.dd(k, i);
        }
    }
    for (int c = 0; c <= n; ++c) {
        double y = rd.q.v() * ed.xi[static_cast<std::size_t>(c)].v();
        for (int j = 0; j < n; ++j) y -= V[j] * jet.d({j}, c);
        rd.ybar[static_cast<std::size_t>(c)] = y;
        for (int i = 0; i < n; ++i) {
            double dy = rd.q.d(i) * ed.xi[static_cast<std::size_t>(c)].v() +
                        rd.q.v() * ed.xi[static_cast<std::size_t>(c)].d(i);
            for (int j = 0; j < n; ++j) dy -= dV[i][j] * jet.d({j}, c) + V[j] * jet.d({i, j}, c);
            rd.dybar[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] = dy;
        }
    }

    // frame invariants: <X, x_i> = 0 and <X, ybar> = 1
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double dot = 0.0, mag = 0.0;
        for (int c = 0; c <= n; ++c) {
            dot += rd.X[static_cast<std::size_t>(c)] * jet.d({i}, c);
            mag += std::abs(rd.X[static_cast<std::size_t>(c)] * jet.d({i}, c));
        }
        worst = std::max(worst, std::abs(dot) / (1.0 + mag));
    }
    double dxy = 0.0;
    for (int c = 0; c <= n; ++c) dxy += rd.X[static_cast<std::size_t>(c)] * rd.ybar[static_cast<std::size_t>(c)];
    worst = std::max(worst, std::abs(dxy - 1.0));
    rd.max_frame_residual = worst;
    if (!(worst < 1e-10))
        throw GeometryError("relative frame invariants violated (covector conditions)");
    return rd;
}

// ---------------------------------------------------------------------------
// Darboux tensor
// ---------------------------------------------------------------------------

DarbouxTensor darboux_tensor(const RelativeData& rd, const chart::Jet& jet) {
    const int n = rd.n;
    DarbouxTensor A;
    A.n = n;
    // A_jkl = <X, x_jkl> - Γ^m_jk G_ml - Γ^m_jl G_mk - Γ^m_kl G_mj
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
            for (int l = 0; l < n; ++l) {
                double t = 0.0;
                for (int c = 0; c <= n; ++c)
                    t += rd.X[static_cast<std::size_t>(c)] * jet.d({j, k, l}, c);
                for (int m = 0; m < n; ++m) {
                    t -= rd.gamma_G.gamma[m][j][k] * rd.G(m, l).v();
                    t -= rd.gamma_G.gamma[m][j][l] * rd.G(m, k).v();
                    t -= rd.gamma_G.gamma[m][k][l] * rd.G(m, j).v();
                }
                A.a[j][k][l] = t;
            }
        }
    }
    double scale = 0.0, asym = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) scale = std::max(scale, std::abs(A.a[j][k][l]));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                asym = std::max(asym, std::abs(A.a[j][k][l] - A.a[k][j][l]));
                asym = std::max(asym, std::abs(A.a[j][k][l] - A.a[j][l][k]));
            }
    A.max_asymmetry = asym / (1.0 + scale);
    return A;
}

// ---------------------------------------------------------------------------
// Tchebychev vector
// ---------------------------------------------------------------------------

TchebychevResult tchebychev(const RelativeData& rd, const DarbouxTensor& A) {
    const int n = rd.n;
    TchebychevResult r;
    for (int m = 0; m < n; ++m) {
        double t = 0.0;
        for (int i = 0; i < n; ++i)
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    t += rd.G_inv(i, a).v() * rd.G_inv(b, m).v() * A.a[i][a][b];
        r.T[static_cast<std::size_t>(m)] = t / n;
        double tg = 0.0;
        for (int j = 0; j < n; ++j) tg += rd.G_inv(m, j).v() * rd.ln_phi.d(j);
        r.T_gradient[static_cast<std::size_t>(m)] = tg;
    }
    double scale = 0.0, diff = 0.0;
    for (int m = 0; m < n; ++m) {
        scale = std::max(scale, std::abs(r.T[static_cast<std::size_t>(m)]));
        diff = std::max(diff, std::abs(r.T[static_cast<std::size_t>(m)] - r.T_gradient[static_cast<std::size_t>(m)]));
    }
    r.route_discrepancy = diff / (1.0 + scale);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            r.norm_G += rd.G(i, j).v() * r.T[static_cast<std::size_t>(i)] * r.T[static_cast<std::size_t>(j)];
    return r;
}

// ---------------------------------------------------------------------------
// Pick invariant
// ---------------------------------------------------------------------------

PickResult pick_invariant(const RelativeData& rd, const DarbouxTensor& A,
                          const euclid::EuclideanData& ed) {
    const int n = rd.n;
    PickResult r;
    double sum = 0.0;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                for (int a = 0; a < n; ++a)
                    for (int b = 0; b < n; ++b)
                        for (int c = 0; c < n; ++c)
                            sum += A.a[j][k][l] * A.a[a][b][c] * rd.G_inv(j, a).v() *
                                   rd.G_inv(k, b).v() * rd.G_inv(l, c).v();
    r.J = sum / (n * (n - 1));

    // Beltrami route: J = 3(n+2)/(4n(n-1)) q ∇^II(ln q, ln q - ln|K|^(2/(n+2))) + q P/(n(n-1))
    // with P = n(n-1)(S_II - H_I) + (2K)^(-2) ∇^II(K)
    const D2 ln_q = log(rd.q);
    const D2 ln_absK = log_abs(ed.K);
    double dlnq[kMaxDim], dw[kMaxDim], dK[kMaxDim];
    for (int i = 0; i < n; ++i) {
        dlnq[i] = ln_q.d(i);
        dw[i] = ln_q.d(i) - (2.0 / (n + 2)) * ln_absK.d(i);
        dK[i] = ed.K.d(i);
    }
    const double grad_term = euclid::beltrami_first_II(ed, {dlnq, size_t(n)}, {dw, size_t(n)});
    const double P = n * (n - 1) * (ed.S_II - ed.H_I) +
                     euclid::beltrami_first_II(ed, {dK, size_t(n)}, {dK, size_t(n)}) /
                         (4.0 * ed.K.v() * ed.K.v());
    r.J_eq4 = (3.0 * (n + 2) / (4.0 * n * (n - 1))) * rd.q.v() * grad_term +
              rd.q.v() * P / (n * (n - 1));
    r.route_discrepancy = std::abs(r.J - r.J_eq4) / (1.0 + std::abs(r.J));
    return r;
}

// ---------------------------------------------------------------------------
// relative shape operator
// ---------------------------------------------------------------------------

ShapeResult relative_shape(const RelativeData& rd, const chart::Jet& jet,
                           const euclid::EuclideanData& ed) {
    const int n = rd.n;
    ShapeResult r;
    // <ybar_i, x_m> = -B_i^j g_jm  =>  B_i^j = -<ybar_i, x_m> g^(mj)
    for (int i = 0; i < n; ++i) {
        double dots[kMaxDim];
        for (int m = 0; m < n; ++m) {
            double d = 0.0;
            for (int c = 0; c <= n; ++c)
                d += rd.dybar[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] * jet.d({m}, c);
            dots[m] = d;
        }
        for (int j = 0; j < n; ++j) {
            double b = 0.0;
            for (int m = 0; m < n; ++m) b += dots[m] * ed.g_inv(m, j);
            r.B[i][j] = -b;
        }
        double tang = 0.0, mag = 0.0;
        for (int c = 0; c <= n; ++c) {
            tang += ed.xi[static_cast<std::size_t>(c)].v() *
                    rd.dybar[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
            mag += std::abs(rd.dybar[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)]);
        }
        r.max_tangency_residual = std::max(r.max_tangency_residual, std::abs(tang) / (1.0 + mag));
    }
    if (!(r.max_tangency_residual < 1e-8))
        throw GeometryError("relative normal derivatives are not tangential (frame inconsistency)");
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += r.B[i][i];
    r.H = tr / n;

    // Beltrami route: H = q H_I + (q/n)[Δ^II(ln q) + ∇^II(ln q, ln(q |K|^(-1/2)))]
    const D2 ln_q = log(rd.q);
    const D2 ln_absK = log_abs(ed.K);
    double dlnq[kMaxDim], dw[kMaxDim];
    for (int i = 0; i < n; ++i) {
        dlnq[i] = ln_q.d(i);
        dw[i] = ln_q.d(i) - 0.5 * ln_absK.d(i);
    }
    r.H_eq6 = rd.q.v() * ed.H_I +
              (rd.q.v() / n) * (euclid::beltrami_second_II(ed, ln_q) +
                                euclid::beltrami_first_II(ed, {dlnq, size_t(n)}, {dw, size_t(n)}));
    r.route_discrepancy = std::abs(r.H - r.H_eq6) / (1.0 + std::abs(r.H));
    return r;
}

double relative_scalar_curvature(const RelativeData& rd) {
    return scalar_curvature(rd.G) / (rd.n * (rd.n - 1));
}

// ---------------------------------------------------------------------------
// bundle
// ---------------------------------------------------------------------------

namespace {

NormalizedInvariants normalized_stack(const euclid::EuclideanData& ed,
                                      const PreparedNormalization& pn, const chart::Jet& jet) {
    NormalizedInvariants s;
    s.rd = relative_frame(ed, pn, jet);
    s.A = darboux_tensor(s.rd, jet);
    s.tcheb = tchebychev(s.rd, s.A);
    s.pick = pick_invariant(s.rd, s.A, ed);
    s.shape = relative_shape(s.rd, jet, ed);
    s.S = relative_scalar_curvature(s.rd);
    return s;
}

} // namespace

BundleEvaluator::BundleEvaluator(const chart::SurfaceChart& chart, chart::Normalization norm)
    : chart_(&chart),
      main_(std::move(norm), chart),
      aff_(chart::Normalization::equiaffine(), chart),
      euk_(chart::Normalization::euclidean(), chart) {}

InvariantBundle BundleEvaluator::at(std::span<const double> p) const {
    InvariantBundle b;
    b.point.assign(p.begin(), p.end());
    const chart::Jet jet = chart::immersion_jet(*chart_, p, chart::kMaxJetOrder);
    b.ed = euclid::euclidean_data(jet, chart_->orientation_flip());
    b.main = normalized_stack(b.ed, main_, jet);
    b.aff = normalized_stack(b.ed, aff_, jet);
    NormalizedInvariants euk = normalized_stack(b.ed, euk_, jet);
    b.J_euk = euk.pick.J;
    b.S_aff = b.aff.pick.J + b.aff.shape.H;
    return b;
}

} // namespace relgeo::relative
