#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relgeo/chart.hpp"
#include "relgeo/relative.hpp"

namespace relgeo::identities {

// Residual-checkable identities of §§2-4. EQ21A/EQ21B are the two norm
// equivalences characterizing J_aff = 0; EQ22 is the Pick-invariant
// inequality (its residual is the magnitude of the negative part).
enum class IdentityId {
    EQ4, EQ6, EQ7, EQ9, EQ10, EQ11, EQ12, EQ13, EQ14, EQ15, EQ16, EQ18,
    EQ19, EQ20, EQ21A, EQ21B, EQ22, EQ24, EQ25,
};

std::string_view to_string(IdentityId id);
std::optional<IdentityId> identity_from_string(std::string_view name);
const std::vector<IdentityId>& all_identities();

struct ResidualReport {
    IdentityId id = IdentityId::EQ7;
    std::string surface;
    std::string normalization;
    std::vector<int> grid;
    int points = 0;
    double max_residual = 0.0;         // nondimensionalized, maximized over grid
    std::array<double, kMaxDim> at{};  // location of the maximum
    double tol = 0.0;
    bool pass = false;
};

// Residual nondimensionalized by 1 + the largest participating term,
// maximized over the sample grid. Throws GeometryError on dimension
// mismatch (EQ24/EQ25 need n = 2) or signature violation (EQ22 needs
// K_I > 0 on the whole grid).
ResidualReport evaluate_identity(IdentityId id, const chart::SurfaceChart& chart,
                                 const chart::Normalization& norm, const chart::GridSpec& spec,
                                 double tol);

// per-point residual, exposed for targeted tests
struct PointResidual {
    double numerator = 0.0;
    double max_term = 0.0;
    double value() const { return numerator / (1.0 + max_term); }
};
PointResidual identity_residual(IdentityId id, const relative::InvariantBundle& b);

struct ClassificationVerdict {
    enum class Kind { Ruled, Hyperquadric, Neither, Indeterminate };
    Kind verdict = Kind::Indeterminate;
    int positive_curvature_points = 0;
    int negative_curvature_points = 0;
    double sup_J_aff = 0.0;
    double sup_S_II = 0.0;
    double threshold = 0.0;           // as given
    double effective_threshold = 0.0; // threshold * (1 + sup|S_II|)
    std::array<double, kMaxDim> at_sup{};
};

std::string_view to_string(ClassificationVerdict::Kind k);

// Props. 2-3: J_aff = 0 characterizes ruled surfaces (K_I < 0, n = 2) and
// hyperquadrics (K_I > 0); sampled over the grid with a scale-aware bound.
ClassificationVerdict classify_surface(const chart::SurfaceChart& chart,
                                       const chart::GridSpec& spec, double threshold = 1e-6);

struct ProportionalityResult {
    bool proportional = false;
    double deviation = 0.0;  // sample standard deviation of φ over the grid
    double mean_phi = 0.0;
};

// φ constant over the grid <=> q is a constant multiple of q_aff
ProportionalityResult proportionality_test(const chart::SurfaceChart& chart,
                                           const chart::Normalization& norm,
                                           const chart::GridSpec& spec, double tol);

struct PickInequalityReport {
    double min_difference = 0.0;       // min over grid of J/q - J_aff/q_aff
    std::array<double, kMaxDim> at_min{};
    double max_eq13_residual = 0.0;    // pointwise agreement with Eq.(13)
    bool pass = false;                 // min >= -1e-9 and Eq.(13) holds to 1e-6
};

PickInequalityReport pick_inequality_check(const chart::SurfaceChart& chart,
                                           const chart::Normalization& norm,
                                           const chart::GridSpec& spec);

} // namespace relgeo::identities
