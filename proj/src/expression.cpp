#include "specbranch/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace specbranch {

using Complex = std::complex<double>;

struct Expression::Node {
    enum class Kind { Constant, T, X, Negate, Add, Subtract, Multiply, Divide, Power, Call };
    enum class Function { Sin, Cos, Exp, Sqrt, Abs };

    Kind kind = Kind::Constant;
    Complex value{};
    Function function = Function::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

Complex integer_power(Complex base, long long exponent)
{
    const bool invert = exponent < 0;
    unsigned long long e = static_cast<unsigned long long>(invert ? -exponent : exponent);
    Complex result{1.0, 0.0};
    while (e != 0) {
        if (e & 1ULL) result *= base;
        base *= base;
        e >>= 1;
    }
    return invert ? Complex{1.0, 0.0} / result : result;
}

Complex evaluate_node(const Node& node, double t, double x)
{
    switch (node.kind) {
    case Node::Kind::Constant: return node.value;
    case Node::Kind::T: return {t, 0.0};
    case Node::Kind::X: return {x, 0.0};
    case Node::Kind::Negate: return -evaluate_node(*node.lhs, t, x);
    case Node::Kind::Add: return evaluate_node(*node.lhs, t, x) + evaluate_node(*node.rhs, t, x);
    case Node::Kind::Subtract:
        return evaluate_node(*node.lhs, t, x) - evaluate_node(*node.rhs, t, x);
    case Node::Kind::Multiply:
        return evaluate_node(*node.lhs, t, x) * evaluate_node(*node.rhs, t, x);
    case Node::Kind::Divide:
        return evaluate_node(*node.lhs, t, x) / evaluate_node(*node.rhs, t, x);
    case Node::Kind::Power: {
        const Complex base = evaluate_node(*node.lhs, t, x);
        const Complex exponent = evaluate_node(*node.rhs, t, x);
        const double re = exponent.real();
        if (exponent.imag() == 0.0 && re == std::trunc(re) && std::abs(re) <= 4096.0) {
            return integer_power(base, static_cast<long long>(re));
        }
        return std::pow(base, exponent);
    }
    case Node::Kind::Call: {
        const Complex arg = evaluate_node(*node.lhs, t, x);
        const bool real_arg = arg.imag() == 0.0;
        switch (node.function) {
        case Node::Function::Sin: return real_arg ? Complex{std::sin(arg.real())} : std::sin(arg);
        case Node::Function::Cos: return real_arg ? Complex{std::cos(arg.real())} : std::cos(arg);
        case Node::Function::Exp: return real_arg ? Complex{std::exp(arg.real())} : std::exp(arg);
        case Node::Function::Sqrt:
            return real_arg && arg.real() >= 0.0 ? Complex{std::sqrt(arg.real())} : std::sqrt(arg);
        case Node::Function::Abs: return {std::abs(arg), 0.0};
        }
    }
    }
    return {};
}

class Parser {
public:
    Parser(std::string_view source, bool allow_x) : src_(source), allow_x_(allow_x) {}

    NodePtr parse()
    {
        skip_space();
        if (pos_ >= src_.size()) throw ExpressionError("empty expression", pos_);
        NodePtr root = expression();
        skip_space();
        if (pos_ < src_.size()) {
            throw ExpressionError(std::string("unexpected '") + src_[pos_] + "'", pos_);
        }
        return root;
    }

    bool uses_i() const { return uses_i_; }

private:
    static NodePtr make_binary(Node::Kind kind, NodePtr lhs, NodePtr rhs)
    {
        auto node = std::make_shared<Node>();
        node->kind = kind;
        node->lhs = std::move(lhs);
        node->rhs = std::move(rhs);
        return node;
    }

    static NodePtr make_constant(Complex value)
    {
        auto node = std::make_shared<Node>();
        node->kind = Node::Kind::Constant;
        node->value = value;
        return node;
    }

    void skip_space()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_space();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            throw ExpressionError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr expression()
    {
        NodePtr lhs = term();
        for (;;) {
            if (accept('+')) {
                lhs = make_binary(Node::Kind::Add, lhs, term());
            } else if (accept('-')) {
                lhs = make_binary(Node::Kind::Subtract, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term()
    {
        NodePtr lhs = unary();
        for (;;) {
            if (accept('*')) {
                lhs = make_binary(Node::Kind::Multiply, lhs, unary());
            } else if (accept('/')) {
                lhs = make_binary(Node::Kind::Divide, lhs, unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr unary()
    {
        if (accept('-')) {
            auto node = std::make_shared<Node>();
            node->kind = Node::Kind::Negate;
            node->lhs = unary();
            return node;
        }
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power()
    {
        NodePtr base = primary();
        if (accept('^')) return make_binary(Node::Kind::Power, base, unary());
        return base;
    }

    NodePtr primary()
    {
        skip_space();
        if (pos_ >= src_.size()) throw ExpressionError("unexpected end of expression", pos_);
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
        if (accept('(')) {
            NodePtr inner = expression();
            expect(')');
            return inner;
        }
        throw ExpressionError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t count = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++count;
            }
            return count;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) throw ExpressionError("malformed number", start);
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) throw ExpressionError("malformed exponent", start);
        }
        const std::string text(src_.substr(start, pos_ - start));
        return make_constant({std::strtod(text.c_str(), nullptr), 0.0});
    }

    NodePtr name()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string_view id = src_.substr(start, pos_ - start);
        if (id == "t" || (id == "x" && allow_x_)) {
            auto node = std::make_shared<Node>();
            node->kind = id == "t" ? Node::Kind::T : Node::Kind::X;
            return node;
        }
        if (id == "i") {
            uses_i_ = true;
            return make_constant({0.0, 1.0});
        }
        if (id == "pi") return make_constant({std::numbers::pi, 0.0});

        static constexpr std::pair<std::string_view, Node::Function> functions[] = {
            {"sin", Node::Function::Sin},   {"cos", Node::Function::Cos},
            {"exp", Node::Function::Exp},   {"sqrt", Node::Function::Sqrt},
            {"abs", Node::Function::Abs},
        };
        for (const auto& [fname, fn] : functions) {
            if (id == fname) {
                expect('(');
                auto node = std::make_shared<Node>();
                node->kind = Node::Kind::Call;
                node->function = fn;
                node->lhs = expression();
                expect(')');
                return node;
            }
        }
        throw ExpressionError("unknown identifier '" + std::string(id) + "'", start);
    }

    std::string_view src_;
    bool allow_x_;
    std::size_t pos_ = 0;
    bool uses_i_ = false;
};

} // namespace

Complex Expression::evaluate(double t, double x) const
{
    if (!root_) throw std::logic_error("evaluating an empty expression");
    return evaluate_node(*root_, t, x);
}

Expression parse_expression(std::string_view source, bool allow_x)
{
    Parser parser(source, allow_x);
    Expression expr;
    expr.root_ = parser.parse();
    expr.source_ = std::string(source);
    expr.uses_i_ = parser.uses_i();
    return expr;
}

} // namespace specbranch
