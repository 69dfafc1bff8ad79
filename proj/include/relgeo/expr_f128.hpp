#pragma once

// binary128 expression evaluation, used by the finite-difference jet oracle
// to keep high-order difference quotients above the cancellation floor.

#include <span>

#include "relgeo/expr.hpp"

namespace relgeo::expr {

__float128 evaluate_f128(const Expression& e, std::span<const __float128> bindings);

} // namespace relgeo::expr
