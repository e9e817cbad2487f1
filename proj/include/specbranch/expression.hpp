#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace specbranch {

// Syntax or name error in an expression, with a 0-based character offset.
class ExpressionError : public std::invalid_argument {
public:
    ExpressionError(const std::string& message, std::size_t position)
        : std::invalid_argument(message + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/*
 * expression ::= term { ("+" | "-") term }
 * term       ::= unary { ("*" | "/") unary }
 * unary      ::= ("-" | "+") unary | power
 * power      ::= primary [ "^" unary ]
 * primary    ::= number | name | function "(" expression ")" | "(" expression ")"
 * function   ::= "sin" | "cos" | "exp" | "sqrt" | "abs"
 * name       ::= "t" | "i" | "pi" | "x" (potentials only)
 *
 * Values are complex doubles. Integral exponents are applied by exact repeated
 * multiplication, so 2^(-9) is exactly 1/512.
 */
class Expression {
public:
    struct Node;

    Expression() = default;

    std::complex<double> evaluate(double t, double x = 0.0) const;
    const std::string& source() const noexcept { return source_; }
    bool uses_imaginary_unit() const noexcept { return uses_i_; }

private:
    friend Expression parse_expression(std::string_view, bool);
    std::shared_ptr<const Node> root_;
    std::string source_;
    bool uses_i_ = false;
};

// Parses an expression in t. With allow_x the spatial variable x is also bound
// (Schrödinger potentials V(t, x)).
Expression parse_expression(std::string_view source, bool allow_x = false);

} // namespace specbranch
