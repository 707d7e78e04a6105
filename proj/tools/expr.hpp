#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lfe {

/// Tiny arithmetic language for maps, coefficients and h0.
///
///   literals, pi, variables x y z (= x1 x2 x3) and x1..x9,
///   + - * / ^ (right associative), unary minus, parentheses,
///   abs sqrt exp log floor, mod(a, b) min(a, b) max(a, b), step(t) = [t >= 0].
///
/// Parse errors throw lorentzfe::InputError with the column.
class Expr {
public:
    static Expr parse(const std::string& text);

    double operator()(std::span<const double> vars) const;
    double operator()(double x) const { return (*this)(std::span<const double>(&x, 1)); }

    /// Highest variable index used plus one (0 for constants).
    std::size_t arity() const { return arity_; }
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::size_t arity_ = 0;
    std::string text_;
};

}  // namespace lfe
