#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relgeo/dscalar.hpp"
#include "relgeo/errors.hpp"
#include "relgeo/expr.hpp"

namespace relgeo::chart {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

// Derivative multi-index: exponent per parameter, total order <= 4.
struct MultiIndex {
    std::array<std::uint8_t, kMaxDim> e{};

    int order(int n) const {
        int s = 0;
        for (int i = 0; i < n; ++i) s += e[static_cast<std::size_t>(i)];
        return s;
    }
    bool operator==(const MultiIndex&) const = default;

    static MultiIndex from_dirs(std::span<const int> dirs) {
        MultiIndex m;
        for (int d : dirs) ++m.e[static_cast<std::size_t>(d)];
        return m;
    }
};

// all multi-indices of order <= max_order, graded, deterministic order
std::vector<MultiIndex> jet_layout(int n, int max_order);

// Partial derivatives of the immersion at one point: multi-index -> vector
// in R^(n+1), stored once per sorted multi-index.
class Jet {
public:
    Jet(int n, int order, std::vector<double> point);

    int dim() const { return n_; }
    int ambient_dim() const { return n_ + 1; }
    int order() const { return order_; }
    std::span<const double> point() const { return point_; }
    const std::vector<MultiIndex>& layout() const { return layout_; }

    std::span<double> entry(int layout_index);
    std::span<const double> entry(int layout_index) const;
    std::span<const double> entry(const MultiIndex& m) const;

    // component c of the derivative along the listed directions
    double d(std::initializer_list<int> dirs, int c) const;
    double d(std::span<const int> dirs, int c) const;

    // component c packaged as a value-with-derivatives; requires
    // order(dirs) + 2 <= order()
    D2 d2(std::span<const int> dirs, int c) const;
    D2 d2(std::initializer_list<int> dirs, int c) const;

private:
    int index_of(const MultiIndex& m) const;

    int n_ = 0;
    int order_ = 0;
    std::vector<double> point_;
    std::vector<MultiIndex> layout_;
    std::vector<double> data_;  // layout-major, ambient_dim components each
};

// Parametrized hypersurface patch x: box in R^n -> R^(n+1). Symbolic
// derivative tables up to order 4 are built once at construction;
// everything is immutable afterwards.
class SurfaceChart {
public:
    SurfaceChart(std::string name, int n, std::vector<expr::Expression> components,
                 std::vector<Interval> domain, std::vector<expr::Expression> guards = {},
                 bool orientation_flip = false);

    const std::string& name() const { return name_; }
    int dim() const { return n_; }
    int ambient_dim() const { return n_ + 1; }
    const std::vector<Interval>& domain() const { return domain_; }
    const std::vector<expr::Expression>& components() const { return components_; }
    const std::vector<expr::Expression>& guards() const { return guards_; }
    bool orientation_flip() const { return orientation_flip_; }
    const std::vector<std::string>& params() const { return params_; }

    bool in_domain(std::span<const double> p) const;
    // domain membership + all guards strictly positive
    bool admissible(std::span<const double> p, std::string* why = nullptr) const;

    const std::vector<MultiIndex>& derivative_layout() const { return layout_; }
    const expr::Expression& derivative(int layout_index, int component) const;

    // canonical parameter names: "u","v" for n = 2, else "u1".."un"
    static std::vector<std::string> default_params(int n);

private:
    std::string name_;
    int n_;
    std::vector<std::string> params_;
    std::vector<expr::Expression> components_;
    std::vector<Interval> domain_;
    std::vector<expr::Expression> guards_;
    bool orientation_flip_;
    std::vector<MultiIndex> layout_;
    std::vector<std::vector<expr::Expression>> derivs_;  // [layout][component]
};

inline constexpr int kMaxJetOrder = 4;

// exact symbolic derivatives evaluated at p
Jet immersion_jet(const SurfaceChart& chart, std::span<const double> p, int order);

// central differences with one Richardson step, sampled in binary128 so the
// 1e-4 step survives cancellation at orders 3-4
Jet finite_difference_jet(const SurfaceChart& chart, std::span<const double> p, int order);

struct GridSpec {
    std::vector<int> counts;       // samples per parameter, each >= 3
    double margin = 0.1;           // interior margin fraction, in (0, 0.5)
    std::uint64_t seed = 0;        // consumed by randomized test fields only

    static GridSpec uniform(int n, int count, double margin = 0.1);
};

// deterministic tensor-product grid, strictly interior, guard-filtered,
// row-major ordering
std::vector<std::vector<double>> sample_grid(const SurfaceChart& chart, const GridSpec& spec);

// Relative normalization specified through its support function.
struct Normalization {
    enum class Kind {
        Euclidean,         // q = 1
        Equiaffine,        // q = q_aff = |K_I|^(1/(n+2))
        ScaledEquiaffine,  // q = c * q_aff
        Custom,            // q = expression(u)
        CustomRelative,    // q = q_aff * expression(u)
    };
    Kind kind = Kind::Euclidean;
    double scale = 1.0;
    std::optional<expr::Expression> q;
    std::string descriptor = "euclidean";

    static Normalization euclidean();
    static Normalization equiaffine();
    static Normalization scaled_equiaffine(double c);
    static Normalization custom(expr::Expression q, std::string descriptor);
    static Normalization custom_relative(expr::Expression factor, std::string descriptor);
};

// descriptor mini-syntax: "euclidean" | "equiaffine" | "equiaffine*<c>" |
// "q:<expr>" | "qaff*<expr>"
Normalization parse_normalization(std::string_view descriptor, const SurfaceChart& chart);

} // namespace relgeo::chart
