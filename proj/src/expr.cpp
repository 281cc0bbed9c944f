#include "ioss/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>

namespace ioss {

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
    Type type = Type::End;
    double number = 0.0;
    std::string text;
    std::size_t pos = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        current_ = Token{};
        current_.pos = pos_;
        if (pos_ >= src_.size()) {
            current_.type = Token::Type::End;
            return;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': current_.type = Token::Type::Plus; ++pos_; return;
            case '-': current_.type = Token::Type::Minus; ++pos_; return;
            case '*': current_.type = Token::Type::Star; ++pos_; return;
            case '/': current_.type = Token::Type::Slash; ++pos_; return;
            case '^': current_.type = Token::Type::Caret; ++pos_; return;
            case '(': current_.type = Token::Type::LParen; ++pos_; return;
            case ')': current_.type = Token::Type::RParen; ++pos_; return;
            case ',': current_.type = Token::Type::Comma; ++pos_; return;
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lexNumber();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            current_.type = Token::Type::Ident;
            current_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        throw ExprError("unexpected character '" + std::string(1, c) + "' at position " +
                            std::to_string(pos_),
                        pos_);
    }

    void lexNumber() {
        std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    ++pos_;
            } else {
                pos_ = mark;  // 'e' was not an exponent, leave it for the ident lexer
            }
        }
        const std::string_view body = src_.substr(start, pos_ - start);
        double value = 0.0;
        const auto res = std::from_chars(body.data(), body.data() + body.size(), value);
        if (res.ec != std::errc{} || res.ptr != body.data() + body.size())
            throw ExprError("malformed number at position " + std::to_string(start), start);
        current_.type = Token::Type::Number;
        current_.number = value;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    Token current_;
};

std::optional<UnaryOp> unaryFunction(const std::string& name) {
    if (name == "abs") return UnaryOp::Abs;
    if (name == "sin") return UnaryOp::Sin;
    if (name == "cos") return UnaryOp::Cos;
    if (name == "exp") return UnaryOp::Exp;
    if (name == "ln") return UnaryOp::Ln;
    if (name == "sqrt") return UnaryOp::Sqrt;
    if (name == "sat") return UnaryOp::Sat;
    return std::nullopt;
}

std::optional<BinaryOp> binaryFunction(const std::string& name) {
    if (name == "min") return BinaryOp::Min;
    if (name == "max") return BinaryOp::Max;
    return std::nullopt;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> vars) : lexer_(text) {
        ast_.variables.assign(vars.begin(), vars.end());
    }

    ExprAst run() {
        ast_.root = parseSum();
        const Token& t = lexer_.peek();
        if (t.type != Token::Type::End)
            throw ExprError("unexpected trailing input at position " + std::to_string(t.pos), t.pos);
        return std::move(ast_);
    }

private:
    int add(ExprAst::Node node) {
        ast_.nodes.push_back(node);
        return static_cast<int>(ast_.nodes.size()) - 1;
    }

    int parseSum() {
        int lhs = parseProduct();
        while (true) {
            const Token::Type t = lexer_.peek().type;
            if (t != Token::Type::Plus && t != Token::Type::Minus) return lhs;
            lexer_.take();
            int rhs = parseProduct();
            ExprAst::Node node;
            node.kind = ExprAst::Kind::Binary;
            node.bin = (t == Token::Type::Plus) ? BinaryOp::Add : BinaryOp::Sub;
            node.a = lhs;
            node.b = rhs;
            lhs = add(node);
        }
    }

    int parseProduct() {
        int lhs = parseUnary();
        while (true) {
            const Token::Type t = lexer_.peek().type;
            if (t != Token::Type::Star && t != Token::Type::Slash) return lhs;
            lexer_.take();
            int rhs = parseUnary();
            ExprAst::Node node;
            node.kind = ExprAst::Kind::Binary;
            node.bin = (t == Token::Type::Star) ? BinaryOp::Mul : BinaryOp::Div;
            node.a = lhs;
            node.b = rhs;
            lhs = add(node);
        }
    }

    // Unary minus sits between mul/div and pow, so -x^2 reads as -(x^2).
    int parseUnary() {
        if (lexer_.peek().type == Token::Type::Minus) {
            lexer_.take();
            int child = parseUnary();
            ExprAst::Node node;
            node.kind = ExprAst::Kind::Unary;
            node.un = UnaryOp::Neg;
            node.a = child;
            return add(node);
        }
        return parsePower();
    }

    int parsePower() {
        int base = parsePrimary();
        if (lexer_.peek().type != Token::Type::Caret) return base;
        lexer_.take();
        int exponent = parseUnary();  // right-associative, allows 2^-3
        ExprAst::Node node;
        node.kind = ExprAst::Kind::Binary;
        node.bin = BinaryOp::Pow;
        node.a = base;
        node.b = exponent;
        return add(node);
    }

    int parsePrimary() {
        Token t = lexer_.take();
        switch (t.type) {
            case Token::Type::Number: {
                ExprAst::Node node;
                node.kind = ExprAst::Kind::Number;
                node.number = t.number;
                return add(node);
            }
            case Token::Type::LParen: {
                int inner = parseSum();
                expect(Token::Type::RParen, ")");
                return inner;
            }
            case Token::Type::Ident:
                return parseIdent(t);
            default:
                throw ExprError("expected a number, variable, function or '(' at position " +
                                    std::to_string(t.pos),
                                t.pos);
        }
    }

    int parseIdent(const Token& t) {
        if (lexer_.peek().type == Token::Type::LParen) {
            lexer_.take();
            if (auto un = unaryFunction(t.text)) {
                int arg = parseSum();
                if (lexer_.peek().type == Token::Type::Comma)
                    throw ExprError("function '" + t.text + "' takes one argument (position " +
                                        std::to_string(t.pos) + ")",
                                    t.pos);
                expect(Token::Type::RParen, ")");
                ExprAst::Node node;
                node.kind = ExprAst::Kind::Unary;
                node.un = *un;
                node.a = arg;
                return add(node);
            }
            if (auto bin = binaryFunction(t.text)) {
                int first = parseSum();
                if (lexer_.peek().type != Token::Type::Comma)
                    throw ExprError("function '" + t.text + "' takes two arguments (position " +
                                        std::to_string(t.pos) + ")",
                                    t.pos);
                lexer_.take();
                int second = parseSum();
                expect(Token::Type::RParen, ")");
                ExprAst::Node node;
                node.kind = ExprAst::Kind::Binary;
                node.bin = *bin;
                node.a = first;
                node.b = second;
                return add(node);
            }
            throw ExprError("unknown function '" + t.text + "' at position " +
                                std::to_string(t.pos),
                            t.pos);
        }
        for (std::size_t i = 0; i < ast_.variables.size(); ++i) {
            if (ast_.variables[i] == t.text) {
                ExprAst::Node node;
                node.kind = ExprAst::Kind::Variable;
                node.var_slot = static_cast<int>(i);
                return add(node);
            }
        }
        throw ExprError("unknown variable '" + t.text + "' at position " + std::to_string(t.pos),
                        t.pos);
    }

    void expect(Token::Type type, const char* what) {
        Token t = lexer_.take();
        if (t.type != type)
            throw ExprError("expected '" + std::string(what) + "' at position " +
                                std::to_string(t.pos),
                            t.pos);
    }

    Lexer lexer_;
    ExprAst ast_;
};

double evalNode(const ExprAst& ast, int index, std::span<const double> values);

double checkedResult(double value, const char* what) {
    if (!std::isfinite(value)) throw EvalError(std::string("non-finite result from ") + what);
    return value;
}

double evalUnary(const ExprAst& ast, const ExprAst::Node& node, std::span<const double> values) {
    const double x = evalNode(ast, node.a, values);
    switch (node.un) {
        case UnaryOp::Neg: return -x;
        case UnaryOp::Abs: return std::fabs(x);
        case UnaryOp::Sin: return std::sin(x);
        case UnaryOp::Cos: return std::cos(x);
        case UnaryOp::Exp: return checkedResult(std::exp(x), "exp");
        case UnaryOp::Ln:
            if (x <= 0.0) throw EvalError("ln of a non-positive value");
            return std::log(x);
        case UnaryOp::Sqrt:
            if (x < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(x);
        case UnaryOp::Sat: return std::min(1.0, std::max(-1.0, x));
    }
    throw EvalError("corrupt unary operator");
}

double evalNode(const ExprAst& ast, int index, std::span<const double> values) {
    const ExprAst::Node& node = ast.nodes[static_cast<std::size_t>(index)];
    switch (node.kind) {
        case ExprAst::Kind::Number: return node.number;
        case ExprAst::Kind::Variable: return values[static_cast<std::size_t>(node.var_slot)];
        case ExprAst::Kind::Unary: return evalUnary(ast, node, values);
        case ExprAst::Kind::Binary: {
            const double a = evalNode(ast, node.a, values);
            const double b = evalNode(ast, node.b, values);
            switch (node.bin) {
                case BinaryOp::Add: return checkedResult(a + b, "+");
                case BinaryOp::Sub: return checkedResult(a - b, "-");
                case BinaryOp::Mul: return checkedResult(a * b, "*");
                case BinaryOp::Div:
                    if (b == 0.0) throw EvalError("division by zero");
                    return checkedResult(a / b, "/");
                case BinaryOp::Pow: return checkedResult(std::pow(a, b), "^");
                case BinaryOp::Min: return std::min(a, b);
                case BinaryOp::Max: return std::max(a, b);
            }
            throw EvalError("corrupt binary operator");
        }
    }
    throw EvalError("corrupt node kind");
}

bool nodesEqual(const ExprAst& lhs, int li, const ExprAst& rhs, int ri) {
    const ExprAst::Node& a = lhs.nodes[static_cast<std::size_t>(li)];
    const ExprAst::Node& b = rhs.nodes[static_cast<std::size_t>(ri)];
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case ExprAst::Kind::Number: return a.number == b.number;
        case ExprAst::Kind::Variable:
            return lhs.variables[static_cast<std::size_t>(a.var_slot)] ==
                   rhs.variables[static_cast<std::size_t>(b.var_slot)];
        case ExprAst::Kind::Unary:
            return a.un == b.un && nodesEqual(lhs, a.a, rhs, b.a);
        case ExprAst::Kind::Binary:
            return a.bin == b.bin && nodesEqual(lhs, a.a, rhs, b.a) && nodesEqual(lhs, a.b, rhs, b.b);
    }
    return false;
}

std::string formatNumber(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

void printNode(const ExprAst& ast, int index, std::string& out) {
    const ExprAst::Node& node = ast.nodes[static_cast<std::size_t>(index)];
    switch (node.kind) {
        case ExprAst::Kind::Number:
            out += formatNumber(node.number);
            return;
        case ExprAst::Kind::Variable:
            out += ast.variables[static_cast<std::size_t>(node.var_slot)];
            return;
        case ExprAst::Kind::Unary: {
            const char* name = nullptr;
            switch (node.un) {
                case UnaryOp::Neg: {
                    out += "(-";
                    printNode(ast, node.a, out);
                    out += ")";
                    return;
                }
                case UnaryOp::Abs: name = "abs"; break;
                case UnaryOp::Sin: name = "sin"; break;
                case UnaryOp::Cos: name = "cos"; break;
                case UnaryOp::Exp: name = "exp"; break;
                case UnaryOp::Ln: name = "ln"; break;
                case UnaryOp::Sqrt: name = "sqrt"; break;
                case UnaryOp::Sat: name = "sat"; break;
            }
            out += name;
            out += "(";
            printNode(ast, node.a, out);
            out += ")";
            return;
        }
        case ExprAst::Kind::Binary: {
            const char* infix = nullptr;
            switch (node.bin) {
                case BinaryOp::Add: infix = " + "; break;
                case BinaryOp::Sub: infix = " - "; break;
                case BinaryOp::Mul: infix = " * "; break;
                case BinaryOp::Div: infix = " / "; break;
                case BinaryOp::Pow: infix = " ^ "; break;
                case BinaryOp::Min:
                case BinaryOp::Max: {
                    out += (node.bin == BinaryOp::Min) ? "min(" : "max(";
                    printNode(ast, node.a, out);
                    out += ", ";
                    printNode(ast, node.b, out);
                    out += ")";
                    return;
                }
            }
            out += "(";
            printNode(ast, node.a, out);
            out += infix;
            printNode(ast, node.b, out);
            out += ")";
            return;
        }
    }
}

}  // namespace

ExprAst parse_expr(std::string_view text, std::span<const std::string> vars) {
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos)
        throw ExprError("empty expression", 0);
    Parser parser(text, vars);
    return parser.run();
}

ExprAst parse_expr(std::string_view text, const std::vector<std::string>& vars) {
    return parse_expr(text, std::span<const std::string>(vars.data(), vars.size()));
}

double eval_expr(const ExprAst& ast, std::span<const double> values) {
    if (ast.empty()) throw EvalError("evaluating an empty expression");
    if (values.size() < ast.variables.size())
        throw EvalError("expected " + std::to_string(ast.variables.size()) +
                        " bound values, got " + std::to_string(values.size()));
    return evalNode(ast, ast.root, values);
}

double eval_expr(const ExprAst& ast, const std::map<std::string, double>& bindings) {
    std::vector<double> values(ast.variables.size(), 0.0);
    for (std::size_t i = 0; i < ast.variables.size(); ++i) {
        const auto it = bindings.find(ast.variables[i]);
        if (it == bindings.end()) {
            // Only a genuinely used variable needs a binding.
            bool used = false;
            for (const auto& node : ast.nodes)
                if (node.kind == ExprAst::Kind::Variable &&
                    node.var_slot == static_cast<int>(i)) {
                    used = true;
                    break;
                }
            if (used) throw EvalError("missing binding for variable '" + ast.variables[i] + "'");
            continue;
        }
        values[i] = it->second;
    }
    return eval_expr(ast, std::span<const double>(values.data(), values.size()));
}

std::string to_string(const ExprAst& ast) {
    if (ast.empty()) return "";
    std::string out;
    printNode(ast, ast.root, out);
    return out;
}

bool structurally_equal(const ExprAst& lhs, const ExprAst& rhs) {
    if (lhs.empty() || rhs.empty()) return lhs.empty() && rhs.empty();
    return nodesEqual(lhs, lhs.root, rhs, rhs.root);
}

}  // namespace ioss
