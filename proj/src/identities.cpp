#include "relgeo/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relgeo/errors.hpp"
#include "relgeo/parallel.hpp"

namespace relgeo::identities {

using relative::InvariantBundle;

namespace {

struct IdName {
    IdentityId id;
    std::string_view name;
};

constexpr IdName kIdNames[] = {
    {IdentityId::EQ4, "EQ4"},   {IdentityId::EQ6, "EQ6"},   {IdentityId::EQ7, "EQ7"},
    {IdentityId::EQ9, "EQ9"},   {IdentityId::EQ10, "EQ10"}, {IdentityId::EQ11, "EQ11"},
    {IdentityId::EQ12, "EQ12"}, {IdentityId::EQ13, "EQ13"}, {IdentityId::EQ14, "EQ14"},
    {IdentityId::EQ15, "EQ15"}, {IdentityId::EQ16, "EQ16"}, {IdentityId::EQ18, "EQ18"},
    {IdentityId::EQ19, "EQ19"}, {IdentityId::EQ20, "EQ20"}, {IdentityId::EQ21A, "EQ21A"},
    {IdentityId::EQ21B, "EQ21B"}, {IdentityId::EQ22, "EQ22"}, {IdentityId::EQ24, "EQ24"},
    {IdentityId::EQ25, "EQ25"},
};

double max_abs(std::initializer_list<double> xs) {
    double m = 0.0;
    for (double x : xs) m = std::max(m, std::abs(x));
    return m;
}

// Beltrami operators against the bundle's Euclidean data
double grad1(const InvariantBundle& b, const D2& f, const D2& g) {
    double df[kMaxDim], dg[kMaxDim];
    for (int i = 0; i < b.ed.n; ++i) {
        df[i] = f.d(i);
        dg[i] = g.d(i);
    }
    return euclid::beltrami_first_II(b.ed, {df, size_t(b.ed.n)}, {dg, size_t(b.ed.n)});
}
double grad1(const InvariantBundle& b, const D2& f) { return grad1(b, f, f); }
double lap2(const InvariantBundle& b, const D2& f) { return euclid::beltrami_second_II(b.ed, f); }

} // namespace

std::string_view to_string(IdentityId id) {
    for (const auto& e : kIdNames)
        if (e.id == id) return e.name;
    return "?";
}

std::optional<IdentityId> identity_from_string(std::string_view name) {
    for (const auto& e : kIdNames)
        if (e.name == name) return e.id;
    return std::nullopt;
}

const std::vector<IdentityId>& all_identities() {
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const auto& e : kIdNames) v.push_back(e.id);
        return v;
    }();
    return ids;
}

PointResidual identity_residual(IdentityId id, const InvariantBundle& b) {
    const int n = b.ed.n;
    const double J = b.J(), H = b.H(), S = b.S(), nT = b.norm_T();
    const double q = b.q(), qa = b.q_aff();
    const double J_aff = b.J_aff(), H_aff = b.H_aff(), S_aff = b.S_aff;
    const double S_II = b.ed.S_II, H_I = b.ed.H_I;
    const D2 ln_phi = b.main.rd.ln_phi;
    const D2 ln_qaff = log(b.main.rd.q_aff);

    PointResidual r;
    switch (id) {
        case IdentityId::EQ4: {
            const double t = b.main.pick.J_eq4;
            r.numerator = std::abs(J - t);
            r.max_term = max_abs({J, t});
            return r;
        }
        case IdentityId::EQ6: {
            const double t = b.main.shape.H_eq6;
            r.numerator = std::abs(H - t);
            r.max_term = max_abs({H, t});
            return r;
        }
        case IdentityId::EQ7: {
            const double rhs = (double(n) / (n - 1)) * nT;
            r.numerator = std::abs(H + J - S - rhs);
            r.max_term = max_abs({H, J, S, rhs});
            return r;
        }
        case IdentityId::EQ9: {
            const double via_II = q * grad1(b, ln_phi);
            double via_G = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    via_G += b.main.rd.G_inv(i, j).v() * ln_phi.d(i) * ln_phi.d(j);
            r.numerator = std::max(std::abs(nT - via_II), std::abs(nT - via_G));
            r.max_term = max_abs({nT, via_II, via_G});
            return r;
        }
        case IdentityId::EQ10: {
            const double grad = grad1(b, ln_qaff);
            const double rhs = S_II - H_I + (double((n + 2) * (n + 2)) / (4.0 * n * (n - 1))) * grad;
            r.numerator = std::abs(b.J_euk - rhs);
            r.max_term = max_abs({b.J_euk, S_II, H_I, grad});
            return r;
        }
        case IdentityId::EQ11: {
            const double c1 = 3.0 * (n + 2) / (4.0 * n * (n - 1));
            const double t1 = c1 * (4.0 * n * n / double((n + 2) * (n + 2))) * grad1(b, ln_phi);
            const double t2 = c1 * grad1(b, ln_qaff);
            r.numerator = std::abs(J / q - (t1 - t2 + b.J_euk));
            r.max_term = max_abs({J / q, t1, t2, b.J_euk});
            return r;
        }
        case IdentityId::EQ12: {
            const double c1 = 3.0 * (n + 2) / (4.0 * n * (n - 1));
            const double t = -c1 * grad1(b, ln_qaff) + b.J_euk;
            r.numerator = std::abs(J_aff / qa - t);
            r.max_term = max_abs({J_aff / qa, t, b.J_euk});
            return r;
        }
        case IdentityId::EQ13: {
            const double lhs = J / q - J_aff / qa;
            const double rhs = (3.0 * n / double((n - 1) * (n + 2))) * grad1(b, ln_phi);
            r.numerator = std::abs(lhs - rhs);
            r.max_term = max_abs({J / q, J_aff / qa, rhs});
            return r;
        }
        case IdentityId::EQ14: {
            const double t1 = (2.0 / (n + 2)) * lap2(b, ln_phi);
            const double t2 = (4.0 * n / double((n + 2) * (n + 2))) * grad1(b, ln_phi);
            const double t3 = (double(n - 2) / (n + 2)) * grad1(b, ln_phi, ln_qaff);
            const double t4 = lap2(b, ln_qaff) / n;
            const double t5 = 0.5 * grad1(b, ln_qaff);
            r.numerator = std::abs(H / q - H_I - (t1 + t2 - t3 + t4 - t5));
            r.max_term = max_abs({H / q, H_I, t1, t2, t3, t4, t5});
            return r;
        }
        case IdentityId::EQ15: {
            const double t4 = lap2(b, ln_qaff) / n;
            const double t5 = 0.5 * grad1(b, ln_qaff);
            r.numerator = std::abs(H_aff / qa - H_I - (t4 - t5));
            r.max_term = max_abs({H_aff / qa, H_I, t4, t5});
            return r;
        }
        case IdentityId::EQ16: {
            const double t1 = (2.0 / (n + 2)) * lap2(b, ln_phi);
            const double t2 = (4.0 * n / double((n + 2) * (n + 2))) * grad1(b, ln_phi);
            const double t3 = (double(n - 2) / (n + 2)) * grad1(b, ln_phi, ln_qaff);
            r.numerator = std::abs(H / q - H_aff / qa - (t1 + t2 - t3));
            r.max_term = max_abs({H / q, H_aff / qa, t1, t2, t3});
            return r;
        }
        case IdentityId::EQ18: {
            const double t1 = (2.0 / (n + 2)) * lap2(b, ln_phi);
            const double t2 = (double(n * (n - 2)) / double((n + 2) * (n + 2))) * grad1(b, ln_phi);
            const double t3 = (double(n - 2) / (n + 2)) * grad1(b, ln_phi, ln_qaff);
            r.numerator = std::abs(S / q - S_aff / qa - (t1 - t2 - t3));
            r.max_term = max_abs({S / q, S_aff / qa, t1, t2, t3});
            return r;
        }
        case IdentityId::EQ19: {
            const double f_main = (3.0 * (S - H) + (n - 1) * J) / q;
            const double rhs = (n + 2) * J_aff / qa;
            const double f_aff = (3.0 * (b.aff.S - H_aff) + (n - 1) * J_aff) / qa;
            r.numerator = std::max(std::abs(f_main - rhs), std::abs(f_main - f_aff));
            r.max_term = max_abs({f_main, rhs, f_aff});
            return r;
        }
        case IdentityId::EQ20: {
            const double ratio = q / qa;
            const double rhs1 = (double((n - 1) * (n + 2)) / (3.0 * n)) * (J - ratio * J_aff);
            const double rhs2 = (double(n + 2) / n) * (H - S + ratio * J_aff);
            r.numerator = std::max(std::abs(nT - rhs1), std::abs(nT - rhs2));
            r.max_term = max_abs({nT, rhs1, rhs2});
            return r;
        }
        case IdentityId::EQ21A: {
            const double lhs = 3.0 * n * nT;
            const double rhs = double((n - 1) * (n + 2)) * J;
            r.numerator = std::abs(lhs - rhs);
            r.max_term = max_abs({lhs, rhs});
            return r;
        }
        case IdentityId::EQ21B: {
            const double lhs = double(n) * nT;
            const double rhs = double(n + 2) * (H - S);
            r.numerator = std::abs(lhs - rhs);
            r.max_term = max_abs({lhs, rhs});
            return r;
        }
        case IdentityId::EQ22: {
            const double diff = J / q - J_aff / qa;
            r.numerator = std::max(0.0, -diff);
            r.max_term = max_abs({J / q, J_aff / qa});
            return r;
        }
        case IdentityId::EQ24: {
            const double rhs = 0.5 * lap2(b, ln_phi);
            r.numerator = std::abs(S / q - S_aff / qa - rhs);
            r.max_term = max_abs({S / q, S_aff / qa, rhs});
            return r;
        }
        case IdentityId::EQ25: {
            const double rhs = 0.5 * lap2(b, ln_qaff);
            r.numerator = std::abs(S_aff / qa - S_II - rhs);
            r.max_term = max_abs({S_aff / qa, S_II, rhs});
            return r;
        }
    }
    throw GeometryError("unknown identity id");
}

ResidualReport evaluate_identity(IdentityId id, const chart::SurfaceChart& chart,
                                 const chart::Normalization& norm, const chart::GridSpec& spec,
                                 double tol) {
    if ((id == IdentityId::EQ24 || id == IdentityId::EQ25) && chart.dim() != 2)
        throw GeometryError(std::string(to_string(id)) + " requires a two-dimensional chart");

    const auto grid = chart::sample_grid(chart, spec);
    if (grid.empty()) throw GeometryError("empty sample grid (all points inadmissible)");

    // per-point records stay small so large (e.g. n = 3) grids do not hold
    // whole bundles in memory
    const relative::BundleEvaluator eval(chart, norm);
    std::vector<double> residuals(grid.size());
    std::vector<char> k_positive(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const InvariantBundle b = eval.at(grid[i]);
        residuals[i] = identity_residual(id, b).value();
        k_positive[i] = b.ed.K.v() > 0.0 ? 1 : 0;
    });

    if (id == IdentityId::EQ22) {
        for (char kp : k_positive)
            if (!kp) throw GeometryError("EQ22 requires positive Gaussian curvature on the grid");
    }

    ResidualReport rep;
    rep.id = id;
    rep.surface = chart.name();
    rep.normalization = norm.descriptor;
    rep.grid = spec.counts;
    rep.points = static_cast<int>(grid.size());
    rep.tol = tol;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        if (residuals[i] >= rep.max_residual) {
            rep.max_residual = residuals[i];
            for (int d = 0; d < chart.dim(); ++d) rep.at[static_cast<std::size_t>(d)] = grid[i][static_cast<std::size_t>(d)];
        }
    }
    rep.pass = rep.max_residual < tol;
    return rep;
}

ClassificationVerdict classify_surface(const chart::SurfaceChart& chart,
                                       const chart::GridSpec& spec, double threshold) {
    const auto grid = chart::sample_grid(chart, spec);
    if (grid.empty()) throw GeometryError("empty sample grid (all points inadmissible)");

    const relative::BundleEvaluator eval(chart, chart::Normalization::equiaffine());
    struct PointRecord {
        char k_positive;
        double abs_s_ii, abs_j_aff;
    };
    std::vector<PointRecord> records(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const InvariantBundle b = eval.at(grid[i]);
        records[i] = {b.ed.K.v() > 0.0 ? char(1) : char(0), std::abs(b.ed.S_II),
                      std::abs(b.J_aff())};
    });

    ClassificationVerdict v;
    v.threshold = threshold;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const PointRecord& r = records[i];
        if (r.k_positive)
            ++v.positive_curvature_points;
        else
            ++v.negative_curvature_points;
        v.sup_S_II = std::max(v.sup_S_II, r.abs_s_ii);
        if (r.abs_j_aff >= v.sup_J_aff) {
            v.sup_J_aff = r.abs_j_aff;
            for (int d = 0; d < chart.dim(); ++d) v.at_sup[static_cast<std::size_t>(d)] = grid[i][static_cast<std::size_t>(d)];
        }
    }
    v.effective_threshold = threshold * (1.0 + v.sup_S_II);
    const bool small = v.sup_J_aff < v.effective_threshold;
    if (v.positive_curvature_points > 0 && v.negative_curvature_points > 0)
        v.verdict = ClassificationVerdict::Kind::Indeterminate;
    else if (v.negative_curvature_points > 0 && small)
        v.verdict = ClassificationVerdict::Kind::Ruled;
    else if (v.positive_curvature_points > 0 && small)
        v.verdict = ClassificationVerdict::Kind::Hyperquadric;
    else
        v.verdict = ClassificationVerdict::Kind::Neither;
    return v;
}

std::string_view to_string(ClassificationVerdict::Kind k) {
    switch (k) {
        case ClassificationVerdict::Kind::Ruled: return "Ruled";
        case ClassificationVerdict::Kind::Hyperquadric: return "Hyperquadric";
        case ClassificationVerdict::Kind::Neither: return "Neither";
        case ClassificationVerdict::Kind::Indeterminate: return "Indeterminate";
    }
    return "?";
}

ProportionalityResult proportionality_test(const chart::SurfaceChart& chart,
                                           const chart::Normalization& norm,
                                           const chart::GridSpec& spec, double tol) {
    const auto grid = chart::sample_grid(chart, spec);
    if (grid.empty()) throw GeometryError("empty sample grid (all points inadmissible)");

    const relative::BundleEvaluator eval(chart, norm);
    std::vector<double> phi(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { phi[i] = eval.at(grid[i]).phi(); });

    ProportionalityResult r;
    double sum = 0.0;
    for (double p : phi) sum += p;
    r.mean_phi = sum / double(phi.size());
    double sq = 0.0;
    for (double p : phi) sq += (p - r.mean_phi) * (p - r.mean_phi);
    r.deviation = phi.size() > 1 ? std::sqrt(sq / double(phi.size() - 1)) : 0.0;
    r.proportional = r.deviation < tol * (1.0 + r.mean_phi);
    return r;
}

PickInequalityReport pick_inequality_check(const chart::SurfaceChart& chart,
                                           const chart::Normalization& norm,
                                           const chart::GridSpec& spec) {
    const auto grid = chart::sample_grid(chart, spec);
    if (grid.empty()) throw GeometryError("empty sample grid (all points inadmissible)");

    const relative::BundleEvaluator eval(chart, norm);
    struct PointRecord {
        char k_positive;
        double difference, eq13;
    };
    std::vector<PointRecord> records(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const InvariantBundle b = eval.at(grid[i]);
        records[i] = {b.ed.K.v() > 0.0 ? char(1) : char(0),
                      b.J() / b.q() - b.J_aff() / b.q_aff(),
                      identity_residual(IdentityId::EQ13, b).value()};
    });

    PickInequalityReport rep;
    rep.min_difference = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < records.size(); ++i) {
        const PointRecord& r = records[i];
        if (!r.k_positive)
            throw GeometryError("pick_inequality_check requires positive Gaussian curvature");
        if (r.difference < rep.min_difference) {
            rep.min_difference = r.difference;
            for (int d = 0; d < chart.dim(); ++d) rep.at_min[static_cast<std::size_t>(d)] = grid[i][static_cast<std::size_t>(d)];
        }
        rep.max_eq13_residual = std::max(rep.max_eq13_residual, r.eq13);
    }
    rep.pass = rep.min_difference >= -1e-9 && rep.max_eq13_residual < 1e-6;
    return rep;
}

} // namespace relgeo::identities
