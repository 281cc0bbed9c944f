#ifndef IOSS_EXPR_HPP
#define IOSS_EXPR_HPP

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ioss {

class ExprError : public std::runtime_error {
public:
    ExprError(std::string message, std::size_t position)
        : std::runtime_error(std::move(message)), position_(position) {}
    explicit ExprError(std::string message)
        : std::runtime_error(std::move(message)), position_(0) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class EvalError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class UnaryOp { Neg, Abs, Sin, Cos, Exp, Ln, Sqrt, Sat };
enum class BinaryOp { Add, Sub, Mul, Div, Pow, Min, Max };

// Immutable scalar expression tree. Nodes live in a flat vector and refer to
// children by index; variable nodes carry a slot into `variables`, so
// evaluation against a value vector needs no name lookups.
struct ExprAst {
    enum class Kind { Number, Variable, Unary, Binary };

    struct Node {
        Kind kind = Kind::Number;
        double number = 0.0;
        int var_slot = -1;
        UnaryOp un = UnaryOp::Neg;
        BinaryOp bin = BinaryOp::Add;
        int a = -1;
        int b = -1;
    };

    std::vector<Node> nodes;
    int root = -1;
    std::vector<std::string> variables;  // declared slots, in declaration order

    bool empty() const { return root < 0; }
};

// Parses standard infix arithmetic over `vars`. Precedence, tightest first:
// pow (right-assoc), unary minus, mul/div, add/sub. Functions: abs, sin, cos,
// exp, ln, sqrt, sat (one argument); min, max (two arguments).
ExprAst parse_expr(std::string_view text, std::span<const std::string> vars);
ExprAst parse_expr(std::string_view text, const std::vector<std::string>& vars);

// Evaluates with `values[i]` bound to `ast.variables[i]`. Any non-finite
// intermediate (division by zero, ln of a non-positive value, overflow)
// raises EvalError rather than propagating NaN/Inf.
double eval_expr(const ExprAst& ast, std::span<const double> values);

// Convenience overload; throws EvalError if a declared variable is unbound.
double eval_expr(const ExprAst& ast, const std::map<std::string, double>& bindings);

// Fully parenthesized text form; reparses to a structurally identical tree.
std::string to_string(const ExprAst& ast);

bool structurally_equal(const ExprAst& lhs, const ExprAst& rhs);

}  // namespace ioss

#endif
