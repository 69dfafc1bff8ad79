#include "relgeo/expr_f128.hpp"

#include <quadmath.h>

#include <cmath>
#include <sstream>

namespace relgeo::expr {

namespace {

bool integer_exponent_q(__float128 v) {
    return floorq(v) == v && fabsq(v) <= __float128(2147483647.0);
}

__float128 powi_q(__float128 base, long long e) {
    if (e < 0) return __float128(1.0) / powi_q(base, -e);
    __float128 r = 1.0, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

[[noreturn]] void fail_q(const char* what, std::span<const __float128> b) {
    std::ostringstream os;
    os << what << " at point (";
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? ", " : "") << static_cast<double>(b[i]);
    os << ")";
    throw EvalError(os.str());
}

__float128 eval_q(const Node& n, std::span<const __float128> b) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::Constant: return __float128(n.value);
        case K::Variable: return b[static_cast<std::size_t>(n.var)];
        case K::Unary: {
            __float128 x = eval_q(*n.a, b);
            switch (n.uop) {
                case UnaryOp::Neg: return -x;
                case UnaryOp::Sin: return sinq(x);
                case UnaryOp::Cos: return cosq(x);
                case UnaryOp::Exp: return expq(x);
                case UnaryOp::Ln:
                    if (x <= 0) fail_q("ln of nonpositive argument", b);
                    return logq(x);
                case UnaryOp::Sqrt:
                    if (x < 0) fail_q("sqrt of negative argument", b);
                    return sqrtq(x);
                case UnaryOp::Abs: return fabsq(x);
            }
            break;
        }
        case K::Binary: {
            __float128 x = eval_q(*n.a, b);
            __float128 y = eval_q(*n.b, b);
            switch (n.bop) {
                case BinaryOp::Add: return x + y;
                case BinaryOp::Sub: return x - y;
                case BinaryOp::Mul: return x * y;
                case BinaryOp::Div:
                    if (y == 0) fail_q("division by zero", b);
                    return x / y;
                case BinaryOp::Pow:
                    if (integer_exponent_q(y)) {
                        if (x == 0 && y < 0) fail_q("zero base with negative exponent", b);
                        return powi_q(x, static_cast<long long>(y));
                    }
                    if (x <= 0) fail_q("non-integer power of nonpositive base", b);
                    return expq(y * logq(x));
            }
            break;
        }
    }
    fail_q("malformed expression node", b);
}

} // namespace

__float128 evaluate_f128(const Expression& e, std::span<const __float128> bindings) {
    return eval_q(*e.root(), bindings);
}

} // namespace relgeo::expr
