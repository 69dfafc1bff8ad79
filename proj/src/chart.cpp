#include "relgeo/chart.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "relgeo/expr_f128.hpp"

namespace relgeo::chart {

std::vector<MultiIndex> jet_layout(int n, int max_order) {
    std::vector<MultiIndex> out;
    std::vector<MultiIndex> current{MultiIndex{}};
    out.push_back(MultiIndex{});
    for (int k = 1; k <= max_order; ++k) {
        std::vector<MultiIndex> next;
        for (const MultiIndex& m : current) {
            // extend only along axes <= the first nonzero axis, keeping the
            // enumeration duplicate-free
            int limit = n - 1;
            for (int i = 0; i < n; ++i)
                if (m.e[static_cast<std::size_t>(i)] > 0) {
                    limit = i;
                    break;
                }
            for (int i = 0; i <= limit; ++i) {
                MultiIndex mm = m;
                ++mm.e[static_cast<std::size_t>(i)];
                next.push_back(mm);
            }
        }
        // canonical order: lexicographically by exponents, descending
        std::sort(next.begin(), next.end(), [n](const MultiIndex& a, const MultiIndex& b) {
            for (int i = 0; i < n; ++i) {
                if (a.e[static_cast<std::size_t>(i)] != b.e[static_cast<std::size_t>(i)])
                    return a.e[static_cast<std::size_t>(i)] > b.e[static_cast<std::size_t>(i)];
            }
            return false;
        });
        out.insert(out.end(), next.begin(), next.end());
        current = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Jet
// ---------------------------------------------------------------------------

Jet::Jet(int n, int order, std::vector<double> point)
    : n_(n), order_(order), point_(std::move(point)), layout_(jet_layout(n, order)) {
    data_.assign(layout_.size() * static_cast<std::size_t>(ambient_dim()), 0.0);
}

std::span<double> Jet::entry(int layout_index) {
    return {data_.data() + static_cast<std::size_t>(layout_index) * static_cast<std::size_t>(ambient_dim()),
            static_cast<std::size_t>(ambient_dim())};
}

std::span<const double> Jet::entry(int layout_index) const {
    return {data_.data() + static_cast<std::size_t>(layout_index) * static_cast<std::size_t>(ambient_dim()),
            static_cast<std::size_t>(ambient_dim())};
}

int Jet::index_of(const MultiIndex& m) const {
    for (std::size_t i = 0; i < layout_.size(); ++i)
        if (layout_[i] == m) return static_cast<int>(i);
    throw GeometryError("jet entry of order beyond the stored table requested");
}

std::span<const double> Jet::entry(const MultiIndex& m) const { return entry(index_of(m)); }

double Jet::d(std::span<const int> dirs, int c) const {
    return entry(MultiIndex::from_dirs(dirs))[static_cast<std::size_t>(c)];
}

double Jet::d(std::initializer_list<int> dirs, int c) const {
    return d(std::span<const int>(dirs.begin(), dirs.size()), c);
}

D2 Jet::d2(std::span<const int> dirs, int c) const {
    MultiIndex base = MultiIndex::from_dirs(dirs);
    D2 r(n_, entry(base)[static_cast<std::size_t>(c)]);
    for (int i = 0; i < n_; ++i) {
        MultiIndex mi = base;
        ++mi.e[static_cast<std::size_t>(i)];
        r.set_d(i, entry(mi)[static_cast<std::size_t>(c)]);
        for (int j = i; j < n_; ++j) {
            MultiIndex mij = mi;
            ++mij.e[static_cast<std::size_t>(j)];
            r.set_dd(i, j, entry(mij)[static_cast<std::size_t>(c)]);
        }
    }
    return r;
}

D2 Jet::d2(std::initializer_list<int> dirs, int c) const {
    return d2(std::span<const int>(dirs.begin(), dirs.size()), c);
}

// ---------------------------------------------------------------------------
// SurfaceChart
// ---------------------------------------------------------------------------

std::vector<std::string> SurfaceChart::default_params(int n) {
    if (n == 2) return {"u", "v"};
    std::vector<std::string> p;
    for (int i = 1; i <= n; ++i) p.push_back("u" + std::to_string(i));
    return p;
}

SurfaceChart::SurfaceChart(std::string name, int n, std::vector<expr::Expression> components,
                           std::vector<Interval> domain, std::vector<expr::Expression> guards,
                           bool orientation_flip)
    : name_(std::move(name)),
      n_(n),
      params_(default_params(n)),
      components_(std::move(components)),
      domain_(std::move(domain)),
      guards_(std::move(guards)),
      orientation_flip_(orientation_flip),
      layout_(jet_layout(n, kMaxJetOrder)) {
    if (n_ < 2 || n_ > kMaxDim) throw GeometryError("chart dimension must be in [2, " + std::to_string(kMaxDim) + "]");
    if (static_cast<int>(components_.size()) != n_ + 1)
        throw GeometryError("chart needs n+1 components");
    if (static_cast<int>(domain_.size()) != n_) throw GeometryError("chart needs one interval per parameter");
    for (const Interval& iv : domain_)
        if (!(iv.lo < iv.hi)) throw GeometryError("empty domain interval");

    // symbolic derivative table: each entry differentiates its parent along
    // the entry's first active axis; computed once, evaluated per point
    derivs_.resize(layout_.size());
    for (std::size_t idx = 0; idx < layout_.size(); ++idx) {
        const MultiIndex& m = layout_[idx];
        if (m.order(n_) == 0) {
            derivs_[idx] = components_;
            continue;
        }
        int axis = 0;
        while (m.e[static_cast<std::size_t>(axis)] == 0) ++axis;
        MultiIndex parent = m;
        --parent.e[static_cast<std::size_t>(axis)];
        std::size_t pidx = 0;
        while (!(layout_[pidx] == parent)) ++pidx;
        derivs_[idx].reserve(components_.size());
        for (const expr::Expression& e : derivs_[pidx])
            derivs_[idx].push_back(expr::differentiate(e, axis));
    }
}

bool SurfaceChart::in_domain(std::span<const double> p) const {
    for (int i = 0; i < n_; ++i) {
        const Interval& iv = domain_[static_cast<std::size_t>(i)];
        double x = p[static_cast<std::size_t>(i)];
        if (!(x >= iv.lo && x <= iv.hi)) return false;
    }
    return true;
}

bool SurfaceChart::admissible(std::span<const double> p, std::string* why) const {
    if (!in_domain(p)) {
        if (why) *why = "point outside the chart domain";
        return false;
    }
    for (std::size_t k = 0; k < guards_.size(); ++k) {
        if (expr::evaluate(guards_[k], p) <= 0.0) {
            if (why) *why = "guard " + std::to_string(k + 1) + " violated";
            return false;
        }
    }
    return true;
}

const expr::Expression& SurfaceChart::derivative(int layout_index, int component) const {
    return derivs_[static_cast<std::size_t>(layout_index)][static_cast<std::size_t>(component)];
}

Jet immersion_jet(const SurfaceChart& chart, std::span<const double> p, int order) {
    if (order > kMaxJetOrder) throw GeometryError("jet order capped at 4");
    std::string why;
    if (!chart.admissible(p, &why))
        throw GeometryError("inadmissible point: " + why);
    Jet jet(chart.dim(), order, std::vector<double>(p.begin(), p.end()));
    // the chart's derivative table shares the jet layout as a prefix
    for (std::size_t idx = 0; idx < jet.layout().size(); ++idx) {
        auto out = jet.entry(static_cast<int>(idx));
        for (int c = 0; c < chart.ambient_dim(); ++c) {
            const double v = expr::evaluate(chart.derivative(static_cast<int>(idx), c), p);
            if (!std::isfinite(v))
                throw expr::EvalError("non-finite derivative of component " + std::to_string(c + 1) +
                                      " at an admissible point");
            out[static_cast<std::size_t>(c)] = v;
        }
    }
    return jet;
}

// ---------------------------------------------------------------------------
// finite-difference oracle
// ---------------------------------------------------------------------------

namespace {

using f128 = __float128;

// composed central difference along the multi-index directions
f128 central_diff(const expr::Expression& e, std::vector<f128>& p, MultiIndex m, int n, f128 h) {
    int axis = -1;
    for (int i = 0; i < n; ++i)
        if (m.e[static_cast<std::size_t>(i)] > 0) {
            axis = i;
            break;
        }
    if (axis < 0) return expr::evaluate_f128(e, p);
    --m.e[static_cast<std::size_t>(axis)];
    f128 saved = p[static_cast<std::size_t>(axis)];
    p[static_cast<std::size_t>(axis)] = saved + h;
    f128 fp = central_diff(e, p, m, n, h);
    p[static_cast<std::size_t>(axis)] = saved - h;
    f128 fm = central_diff(e, p, m, n, h);
    p[static_cast<std::size_t>(axis)] = saved;
    return (fp - fm) / (2 * h);
}

} // namespace

Jet finite_difference_jet(const SurfaceChart& chart, std::span<const double> p, int order) {
    if (order > kMaxJetOrder) throw GeometryError("jet order capped at 4");
    double pmax = 0.0;
    for (double x : p) pmax = std::max(pmax, std::abs(x));
    const double h = 1e-4 * (1.0 + pmax);
    for (int i = 0; i < chart.dim(); ++i) {
        const Interval& iv = chart.domain()[static_cast<std::size_t>(i)];
        double x = p[static_cast<std::size_t>(i)];
        if (x - iv.lo < 4.0 * h || iv.hi - x < 4.0 * h)
            throw GeometryError("finite_difference_jet: point closer than 4h to the domain boundary");
    }

    Jet jet(chart.dim(), order, std::vector<double>(p.begin(), p.end()));
    std::vector<f128> pq(p.begin(), p.end());
    const f128 hq = f128(h);
    for (std::size_t idx = 0; idx < jet.layout().size(); ++idx) {
        const MultiIndex& m = jet.layout()[idx];
        auto out = jet.entry(static_cast<int>(idx));
        for (int c = 0; c < chart.ambient_dim(); ++c) {
            const expr::Expression& e = chart.components()[static_cast<std::size_t>(c)];
            if (m.order(chart.dim()) == 0) {
                out[static_cast<std::size_t>(c)] = static_cast<double>(expr::evaluate_f128(e, pq));
                continue;
            }
            // one Richardson step: F(h), F(h/2) both O(h^2) accurate
            f128 coarse = central_diff(e, pq, m, chart.dim(), hq);
            f128 fine = central_diff(e, pq, m, chart.dim(), hq / 2);
            out[static_cast<std::size_t>(c)] = static_cast<double>((4 * fine - coarse) / 3);
        }
    }
    return jet;
}

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

GridSpec GridSpec::uniform(int n, int count, double margin) {
    GridSpec s;
    s.counts.assign(static_cast<std::size_t>(n), count);
    s.margin = margin;
    return s;
}

std::vector<std::vector<double>> sample_grid(const SurfaceChart& chart, const GridSpec& spec) {
    if (static_cast<int>(spec.counts.size()) != chart.dim())
        throw GeometryError("grid spec needs one count per parameter");
    for (int c : spec.counts)
        if (c < 3) throw GeometryError("grid counts must be >= 3");
    if (!(spec.margin > 0.0 && spec.margin < 0.5)) throw GeometryError("grid margin must lie in (0, 0.5)");

    std::vector<std::vector<double>> axes(static_cast<std::size_t>(chart.dim()));
    for (int i = 0; i < chart.dim(); ++i) {
        const Interval& iv = chart.domain()[static_cast<std::size_t>(i)];
        int cnt = spec.counts[static_cast<std::size_t>(i)];
        for (int k = 0; k < cnt; ++k) {
            double t = spec.margin + (1.0 - 2.0 * spec.margin) * (cnt == 1 ? 0.5 : double(k) / double(cnt - 1));
            axes[static_cast<std::size_t>(i)].push_back(iv.lo + (iv.hi - iv.lo) * t);
        }
    }

    std::vector<std::vector<double>> points;
    std::vector<std::size_t> idx(static_cast<std::size_t>(chart.dim()), 0);
    for (;;) {
        std::vector<double> p(static_cast<std::size_t>(chart.dim()));
        for (int i = 0; i < chart.dim(); ++i) p[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
        if (chart.admissible(p)) points.push_back(std::move(p));
        // row-major advance: last axis fastest
        int i = chart.dim() - 1;
        for (; i >= 0; --i) {
            if (++idx[static_cast<std::size_t>(i)] < axes[static_cast<std::size_t>(i)].size()) break;
            idx[static_cast<std::size_t>(i)] = 0;
        }
        if (i < 0) break;
    }
    return points;
}

// ---------------------------------------------------------------------------
// normalizations
// ---------------------------------------------------------------------------

Normalization Normalization::euclidean() { return Normalization{}; }

Normalization Normalization::equiaffine() {
    Normalization n;
    n.kind = Kind::Equiaffine;
    n.descriptor = "equiaffine";
    return n;
}

Normalization Normalization::scaled_equiaffine(double c) {
    if (!(c > 0.0)) throw GeometryError("equiaffine scale factor must be positive");
    Normalization n;
    n.kind = Kind::ScaledEquiaffine;
    n.scale = c;
    std::ostringstream os;
    os << "equiaffine*" << c;
    n.descriptor = os.str();
    return n;
}

Normalization Normalization::custom(expr::Expression q, std::string descriptor) {
    Normalization n;
    n.kind = Kind::Custom;
    n.q = std::move(q);
    n.descriptor = std::move(descriptor);
    return n;
}

Normalization Normalization::custom_relative(expr::Expression factor, std::string descriptor) {
    Normalization n;
    n.kind = Kind::CustomRelative;
    n.q = std::move(factor);
    n.descriptor = std::move(descriptor);
    return n;
}

Normalization parse_normalization(std::string_view descriptor, const SurfaceChart& chart) {
    std::string d(descriptor);
    if (d == "euclidean") return Normalization::euclidean();
    if (d == "equiaffine") return Normalization::equiaffine();
    if (d.rfind("equiaffine*", 0) == 0) {
        const char* begin = d.c_str() + 11;
        char* end = nullptr;
        double c = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || !(c > 0.0))
            throw GeometryError("bad equiaffine scale in normalization descriptor '" + d + "'");
        return Normalization::scaled_equiaffine(c);
    }
    if (d.rfind("q:", 0) == 0)
        return Normalization::custom(expr::parse_expression(d.substr(2), chart.params()), d);
    if (d.rfind("qaff*", 0) == 0)
        return Normalization::custom_relative(expr::parse_expression(d.substr(5), chart.params()), d);
    throw GeometryError("unknown normalization descriptor '" + d +
                        "' (expected euclidean | equiaffine | equiaffine*<c> | q:<expr> | qaff*<expr>)");
}

} // namespace relgeo::chart
