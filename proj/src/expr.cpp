#include "relgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <sstream>

namespace relgeo::expr {

namespace {

bool is_const(const NodePtr& n, double v) {
    return n->kind == Node::Kind::Constant && n->value == v;
}

bool integer_exponent(double v) {
    return std::floor(v) == v && std::abs(v) <= 2147483647.0;
}

// integer power by repeated multiplication; negative exponents via reciprocal
double powi(double base, long long e) {
    if (e < 0) return 1.0 / powi(base, -e);
    double r = 1.0, b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

std::optional<double> try_fold_unary(UnaryOp op, double x) {
    switch (op) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Exp: return std::exp(x);
        case UnaryOp::Ln:
            if (x <= 0.0) return std::nullopt;
            return std::log(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) return std::nullopt;
            return std::sqrt(x);
        case UnaryOp::Abs: return std::abs(x);
    }
    return std::nullopt;
}

std::optional<double> try_fold_binary(BinaryOp op, double x, double y) {
    switch (op) {
        case BinaryOp::Add: return x + y;
        case BinaryOp::Sub: return x - y;
        case BinaryOp::Mul: return x * y;
        case BinaryOp::Div:
            if (y == 0.0) return std::nullopt;
            return x / y;
        case BinaryOp::Pow:
            if (integer_exponent(y)) {
                if (x == 0.0 && y < 0.0) return std::nullopt;
                return powi(x, static_cast<long long>(y));
            }
            if (x <= 0.0) return std::nullopt;
            return std::exp(y * std::log(x));
    }
    return std::nullopt;
}

} // namespace

NodePtr make_constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Constant;
    n->value = v;
    return n;
}

NodePtr make_variable(int index) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Variable;
    n->var = index;
    return n;
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
    if (a->kind == Node::Kind::Constant) {
        if (auto v = try_fold_unary(op, a->value)) return make_constant(*v);
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Unary;
    n->uop = op;
    n->a = std::move(a);
    return n;
}

NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
    if (a->kind == Node::Kind::Constant && b->kind == Node::Kind::Constant) {
        if (auto v = try_fold_binary(op, a->value, b->value)) return make_constant(*v);
    }
    // neutral-element and annihilator rules only; stronger rewriting could
    // drop ln/sqrt domain guards
    switch (op) {
        case BinaryOp::Add:
            if (is_const(a, 0.0)) return b;
            if (is_const(b, 0.0)) return a;
            break;
        case BinaryOp::Sub:
            if (is_const(b, 0.0)) return a;
            if (is_const(a, 0.0)) return make_unary(UnaryOp::Neg, std::move(b));
            break;
        case BinaryOp::Mul:
            if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
            if (is_const(a, 1.0)) return b;
            if (is_const(b, 1.0)) return a;
            break;
        case BinaryOp::Div:
            if (is_const(b, 1.0)) return a;
            break;
        case BinaryOp::Pow:
            if (is_const(b, 1.0)) return a;
            if (is_const(b, 0.0)) return make_constant(1.0);
            break;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::Binary;
    n->bop = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

ParseError::ParseError(ParseDiagnostic d, const std::string& text)
    : std::runtime_error("parse error at offset " + std::to_string(d.offset) + ": " + d.message +
                         (d.token.empty() ? std::string{} : " (at '" + d.token + "')") + " in \"" + text + "\""),
      diagnostic(std::move(d)) {}

namespace {

struct Token {
    enum class Kind { Number, Ident, Op, End };
    Kind kind = Kind::End;
    double number = 0.0;
    std::string text;
    std::size_t offset = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.offset = pos_;
        if (pos_ >= s_.size()) {
            tok_.kind = Token::Kind::End;
            return;
        }
        char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && pos_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
                std::size_t save = pos_;
                ++pos_;
                if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
                if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
                } else {
                    pos_ = save;  // bare 'e' belongs to the next token
                }
            }
            tok_.kind = Token::Kind::Number;
            tok_.text = std::string(s_.substr(start, pos_ - start));
            tok_.number = std::strtod(tok_.text.c_str(), nullptr);
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            tok_.kind = Token::Kind::Ident;
            tok_.text = std::string(s_.substr(start, pos_ - start));
            return;
        }
        tok_.kind = Token::Kind::Op;
        tok_.text = std::string(1, c);
        ++pos_;
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    Token tok_;
};

class Parser {
public:
    Parser(std::string_view text, const std::vector<std::string>& params)
        : text_(text), lex_(text), params_(params) {}

    NodePtr parse() {
        NodePtr e = expr();
        if (lex_.peek().kind != Token::Kind::End) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = lex_.peek();
        throw ParseError({t.offset, msg, t.text}, std::string(text_));
    }

    bool accept_op(char c) {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Op && t.text.size() == 1 && t.text[0] == c) {
            lex_.take();
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (accept_op('+'))
                lhs = make_binary(BinaryOp::Add, lhs, term());
            else if (accept_op('-'))
                lhs = make_binary(BinaryOp::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (accept_op('*'))
                lhs = make_binary(BinaryOp::Mul, lhs, factor());
            else if (accept_op('/'))
                lhs = make_binary(BinaryOp::Div, lhs, factor());
            else
                return lhs;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept_op('^')) return make_binary(BinaryOp::Pow, b, factor());
        return b;
    }

    NodePtr base() {
        const Token& t = lex_.peek();
        if (t.kind == Token::Kind::Number) return make_constant(lex_.take().number);
        if (t.kind == Token::Kind::Op && t.text == "-") {
            lex_.take();
            return make_unary(UnaryOp::Neg, base());
        }
        if (t.kind == Token::Kind::Op && t.text == "(") {
            lex_.take();
            NodePtr e = expr();
            if (!accept_op(')')) fail("expected ')'");
            return e;
        }
        if (t.kind == Token::Kind::Ident) {
            Token id = lex_.take();
            if (accept_op('(')) {
                UnaryOp op;
                if (id.text == "sin") op = UnaryOp::Sin;
                else if (id.text == "cos") op = UnaryOp::Cos;
                else if (id.text == "exp") op = UnaryOp::Exp;
                else if (id.text == "ln") op = UnaryOp::Ln;
                else if (id.text == "sqrt") op = UnaryOp::Sqrt;
                else if (id.text == "abs") op = UnaryOp::Abs;
                else
                    throw ParseError({id.offset, "unknown function '" + id.text + "'", id.text},
                                     std::string(text_));
                NodePtr arg = expr();
                if (lex_.peek().kind == Token::Kind::Op && lex_.peek().text == ",")
                    fail("function '" + id.text + "' takes one argument");
                if (!accept_op(')')) fail("expected ')'");
                return make_unary(op, arg);
            }
            if (id.text == "pi") return make_constant(M_PI);
            for (std::size_t i = 0; i < params_.size(); ++i)
                if (params_[i] == id.text) return make_variable(static_cast<int>(i));
            throw ParseError({id.offset, "unknown identifier '" + id.text + "'", id.text},
                             std::string(text_));
        }
        fail("expected number, identifier or '('");
    }

    std::string_view text_;
    Lexer lex_;
    const std::vector<std::string>& params_;
};

} // namespace

Expression parse_expression(std::string_view text, const std::vector<std::string>& params) {
    if (text.empty()) throw ParseError({0, "empty expression", ""}, std::string(text));
    auto shared = std::make_shared<const std::vector<std::string>>(params);
    Parser p(text, *shared);
    return Expression(p.parse(), std::move(shared));
}

// ---------------------------------------------------------------------------
// differentiation
// ---------------------------------------------------------------------------

namespace {

NodePtr diff_node(const NodePtr& n, int var) {
    using K = Node::Kind;
    switch (n->kind) {
        case K::Constant: return make_constant(0.0);
        case K::Variable: return make_constant(n->var == var ? 1.0 : 0.0);
        case K::Unary: {
            NodePtr da = diff_node(n->a, var);
            switch (n->uop) {
                case UnaryOp::Neg: return make_unary(UnaryOp::Neg, da);
                case UnaryOp::Sin: return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Cos, n->a), da);
                case UnaryOp::Cos:
                    return make_binary(BinaryOp::Mul,
                                       make_unary(UnaryOp::Neg, make_unary(UnaryOp::Sin, n->a)), da);
                case UnaryOp::Exp: return make_binary(BinaryOp::Mul, make_unary(UnaryOp::Exp, n->a), da);
                case UnaryOp::Ln: return make_binary(BinaryOp::Div, da, n->a);
                case UnaryOp::Sqrt:
                    return make_binary(BinaryOp::Div, da,
                                       make_binary(BinaryOp::Mul, make_constant(2.0),
                                                   make_unary(UnaryOp::Sqrt, n->a)));
                case UnaryOp::Abs:
                    // d|x| = x/|x| * dx; evaluation at x = 0 divides by zero,
                    // surfacing the kink as a hard domain error
                    return make_binary(BinaryOp::Mul,
                                       make_binary(BinaryOp::Div, n->a, make_unary(UnaryOp::Abs, n->a)),
                                       da);
            }
            break;
        }
        case K::Binary: {
            switch (n->bop) {
                case BinaryOp::Add: return make_binary(BinaryOp::Add, diff_node(n->a, var), diff_node(n->b, var));
                case BinaryOp::Sub: return make_binary(BinaryOp::Sub, diff_node(n->a, var), diff_node(n->b, var));
                case BinaryOp::Mul:
                    return make_binary(BinaryOp::Add,
                                       make_binary(BinaryOp::Mul, diff_node(n->a, var), n->b),
                                       make_binary(BinaryOp::Mul, n->a, diff_node(n->b, var)));
                case BinaryOp::Div:
                    return make_binary(
                        BinaryOp::Div,
                        make_binary(BinaryOp::Sub,
                                    make_binary(BinaryOp::Mul, diff_node(n->a, var), n->b),
                                    make_binary(BinaryOp::Mul, n->a, diff_node(n->b, var))),
                        make_binary(BinaryOp::Mul, n->b, n->b));
                case BinaryOp::Pow: {
                    if (n->b->kind == K::Constant && integer_exponent(n->b->value)) {
                        // d(a^k) = k a^(k-1) a'
                        return make_binary(
                            BinaryOp::Mul, make_constant(n->b->value),
                            make_binary(BinaryOp::Mul,
                                        make_binary(BinaryOp::Pow, n->a, make_constant(n->b->value - 1.0)),
                                        diff_node(n->a, var)));
                    }
                    // a^e = exp(e ln a):  d = a^e (e' ln a + e a'/a)
                    NodePtr da = diff_node(n->a, var);
                    NodePtr de = diff_node(n->b, var);
                    NodePtr t1 = make_binary(BinaryOp::Mul, de, make_unary(UnaryOp::Ln, n->a));
                    NodePtr t2 = make_binary(BinaryOp::Mul, n->b, make_binary(BinaryOp::Div, da, n->a));
                    return make_binary(BinaryOp::Mul, n, make_binary(BinaryOp::Add, t1, t2));
                }
            }
            break;
        }
    }
    return make_constant(0.0);
}

} // namespace

Expression differentiate(const Expression& e, int var) {
    return Expression(diff_node(e.root(), var), e.params_ptr());
}

Expression differentiate(const Expression& e, std::string_view var) {
    const auto& params = e.params();
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i] == var) return differentiate(e, static_cast<int>(i));
    throw std::invalid_argument("differentiate: '" + std::string(var) + "' is not a declared parameter");
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

namespace {

[[noreturn]] void eval_fail(const std::string& what, std::span<const double> bindings) {
    std::ostringstream os;
    os << what << " at point (";
    for (std::size_t i = 0; i < bindings.size(); ++i) os << (i ? ", " : "") << bindings[i];
    os << ")";
    throw EvalError(os.str());
}

double eval_node(const Node& n, std::span<const double> b) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::Constant: return n.value;
        case K::Variable: return b[static_cast<std::size_t>(n.var)];
        case K::Unary: {
            double x = eval_node(*n.a, b);
            switch (n.uop) {
                case UnaryOp::Neg: return -x;
                case UnaryOp::Sin: return std::sin(x);
                case UnaryOp::Cos: return std::cos(x);
                case UnaryOp::Exp: return std::exp(x);
                case UnaryOp::Ln:
                    if (x <= 0.0) eval_fail("ln of nonpositive argument", b);
                    return std::log(x);
                case UnaryOp::Sqrt:
                    if (x < 0.0) eval_fail("sqrt of negative argument", b);
                    return std::sqrt(x);
                case UnaryOp::Abs: return std::abs(x);
            }
            break;
        }
        case K::Binary: {
            double x = eval_node(*n.a, b);
            double y = eval_node(*n.b, b);
            switch (n.bop) {
                case BinaryOp::Add: return x + y;
                case BinaryOp::Sub: return x - y;
                case BinaryOp::Mul: return x * y;
                case BinaryOp::Div:
                    if (y == 0.0) eval_fail("division by zero", b);
                    return x / y;
                case BinaryOp::Pow:
                    if (integer_exponent(y)) {
                        if (x == 0.0 && y < 0.0) eval_fail("zero base with negative exponent", b);
                        return powi(x, static_cast<long long>(y));
                    }
                    if (x <= 0.0) eval_fail("non-integer power of nonpositive base", b);
                    return std::exp(y * std::log(x));
            }
            break;
        }
    }
    eval_fail("malformed expression node", b);
}

} // namespace

double evaluate(const Expression& e, std::span<const double> bindings) {
    return eval_node(*e.root(), bindings);
}

// ---------------------------------------------------------------------------
// printing (conservatively parenthesized; output re-parses to an
// evaluation-equivalent tree)
// ---------------------------------------------------------------------------

namespace {

void print_node(std::ostringstream& os, const Node& n, const std::vector<std::string>& params) {
    using K = Node::Kind;
    switch (n.kind) {
        case K::Constant: {
            if (n.value < 0.0) {
                os << "(";
                os.precision(17);
                os << n.value << ")";
            } else {
                os.precision(17);
                os << n.value;
            }
            return;
        }
        case K::Variable:
            os << params[static_cast<std::size_t>(n.var)];
            return;
        case K::Unary: {
            const char* fn = nullptr;
            switch (n.uop) {
                case UnaryOp::Neg: {
                    os << "(-";
                    print_node(os, *n.a, params);
                    os << ")";
                    return;
                }
                case UnaryOp::Sin: fn = "sin"; break;
                case UnaryOp::Cos: fn = "cos"; break;
                case UnaryOp::Exp: fn = "exp"; break;
                case UnaryOp::Ln: fn = "ln"; break;
                case UnaryOp::Sqrt: fn = "sqrt"; break;
                case UnaryOp::Abs: fn = "abs"; break;
            }
            os << fn << "(";
            print_node(os, *n.a, params);
            os << ")";
            return;
        }
        case K::Binary: {
            const char* op = nullptr;
            switch (n.bop) {
                case BinaryOp::Add: op = " + "; break;
                case BinaryOp::Sub: op = " - "; break;
                case BinaryOp::Mul: op = "*"; break;
                case BinaryOp::Div: op = "/"; break;
                case BinaryOp::Pow: op = "^"; break;
            }
            os << "(";
            print_node(os, *n.a, params);
            os << op;
            print_node(os, *n.b, params);
            os << ")";
            return;
        }
    }
}

} // namespace

std::string to_string(const Expression& e) {
    std::ostringstream os;
    print_node(os, *e.root(), e.params());
    return os.str();
}

} // namespace relgeo::expr
