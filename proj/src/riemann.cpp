#include "relgeo/riemann.hpp"

namespace relgeo {

Christoffels christoffel_symbols(const MatD2& m) {
    const int n = m.k;
    MatD2 inv = inverse(m, D2(n, 1.0));
    Christoffels c;
    c.n = n;
    for (int a = 0; a < n; ++a) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                double val = 0.0;
                for (int k = 0; k < n; ++k)
                    val += 0.5 * inv(a, k).v() * (m(k, i).d(j) + m(k, j).d(i) - m(i, j).d(k));
                c.gamma[a][i][j] = val;
                for (int l = 0; l < n; ++l) {
                    double dv = 0.0;
                    for (int k = 0; k < n; ++k) {
                        dv += 0.5 * inv(a, k).d(l) * (m(k, i).d(j) + m(k, j).d(i) - m(i, j).d(k));
                        dv += 0.5 * inv(a, k).v() *
                              (m(k, i).dd(j, l) + m(k, j).dd(i, l) - m(i, j).dd(k, l));
                    }
                    c.dgamma[a][i][j][l] = dv;
                }
            }
        }
    }
    return c;
}

double scalar_curvature(const MatD2& m) {
    const int n = m.k;
    const Christoffels c = christoffel_symbols(m);
    MatD minv = inverse(values(m));
    // Ricci R_{sv} = ∂_mu Γ^mu_{vs} - ∂_v Γ^mu_{mus} + Γ^mu_{mul}Γ^l_{vs} - Γ^mu_{vl}Γ^l_{mus}
    double R = 0.0;
    for (int s = 0; s < n; ++s) {
        for (int v = 0; v < n; ++v) {
            double ric = 0.0;
            for (int mu = 0; mu < n; ++mu) {
                ric += c.dgamma[mu][v][s][mu] - c.dgamma[mu][mu][s][v];
                for (int l = 0; l < n; ++l)
                    ric += c.gamma[mu][mu][l] * c.gamma[l][v][s] - c.gamma[mu][v][l] * c.gamma[l][mu][s];
            }
            R += minv(s, v) * ric;
        }
    }
    return R;
}

} // namespace relgeo
