#ifndef QBASK_EXPR_HPP
#define QBASK_EXPR_HPP

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qbask/qcalc.hpp"

namespace qbask {

class ExprError : public std::runtime_error {
public:
    explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

/// Arithmetic expression in one variable: numbers, x, + - * / ^, parentheses.
/// Parsed by recursive descent; '^' is right-associative and binds tighter
/// than unary minus.
class Expression {
public:
    static Expression parse(std::string_view text);

    double operator()(double x) const;
    RealFn fn() const;
    const std::string& text() const { return text_; }

    struct Node;

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace qbask

#endif
