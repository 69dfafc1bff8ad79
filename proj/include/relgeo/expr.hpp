#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace relgeo::expr {

enum class UnaryOp { Neg, Sin, Cos, Exp, Ln, Sqrt, Abs };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { Constant, Variable, Unary, Binary };
    Kind kind = Kind::Constant;
    double value = 0.0;  // Constant
    int var = -1;        // Variable: index into the parameter list
    UnaryOp uop = UnaryOp::Neg;
    BinaryOp bop = BinaryOp::Add;
    NodePtr a, b;
};

struct ParseDiagnostic {
    std::size_t offset = 0;  // byte offset into the input text
    std::string message;
    std::string token;
};

class ParseError : public std::runtime_error {
public:
    ParseError(ParseDiagnostic d, const std::string& text);
    ParseDiagnostic diagnostic;
};

// Evaluation-domain failure (ln/sqrt out of domain, division by zero),
// reported together with the offending binding values.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& msg) : std::runtime_error(msg) {}
};

// Immutable symbolic expression over a fixed list of parameter names.
class Expression {
public:
    Expression() = default;
    Expression(NodePtr root, std::shared_ptr<const std::vector<std::string>> params)
        : root_(std::move(root)), params_(std::move(params)) {}

    bool valid() const { return root_ != nullptr; }
    const NodePtr& root() const { return root_; }
    const std::vector<std::string>& params() const { return *params_; }
    std::shared_ptr<const std::vector<std::string>> params_ptr() const { return params_; }
    int param_count() const { return static_cast<int>(params_->size()); }

private:
    NodePtr root_;
    std::shared_ptr<const std::vector<std::string>> params_;
};

Expression parse_expression(std::string_view text, const std::vector<std::string>& params);

Expression differentiate(const Expression& e, int var);
Expression differentiate(const Expression& e, std::string_view var);

double evaluate(const Expression& e, std::span<const double> bindings);

std::string to_string(const Expression& e);

// smart constructors applying the constant-folding / neutral-element rules
NodePtr make_constant(double v);
NodePtr make_variable(int index);
NodePtr make_unary(UnaryOp op, NodePtr a);
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);

} // namespace relgeo::expr
