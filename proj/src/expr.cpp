#include "qbask/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace qbask {

struct Expression::Node {
    enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg };

    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x) const {
        switch (op) {
            case Op::Const: return value;
            case Op::Var: return x;
            case Op::Add: return lhs->eval(x) + rhs->eval(x);
            case Op::Sub: return lhs->eval(x) - rhs->eval(x);
            case Op::Mul: return lhs->eval(x) * rhs->eval(x);
            case Op::Div: return lhs->eval(x) / rhs->eval(x);
            case Op::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
            case Op::Neg: return -lhs->eval(x);
        }
        return 0.0;
    }
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, double v = 0.0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = v;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            skip_ws();
            if (accept('+'))
                lhs = make(Node::Op::Add, lhs, term());
            else if (accept('-'))
                lhs = make(Node::Op::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            skip_ws();
            if (accept('*'))
                lhs = make(Node::Op::Mul, lhs, unary());
            else if (accept('/'))
                lhs = make(Node::Op::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        skip_ws();
        if (accept('-')) return make(Node::Op::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        skip_ws();
        if (accept('^')) return make(Node::Op::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            skip_ws();
            if (!accept(')')) fail("missing closing parenthesis");
            return inner;
        }
        if (c == 'x' || c == 'X') {
            ++pos_;
            return make(Node::Op::Var);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            const char* begin = text_.data() + pos_;
            char* end = nullptr;
            double v = std::strtod(begin, &end);
            if (end == begin) fail("malformed number");
            pos_ += static_cast<std::size_t>(end - begin);
            return make(Node::Op::Const, nullptr, nullptr, v);
        }
        fail(std::string("unexpected character '") + c + "'");
        return nullptr;  // unreachable
    }

    bool accept(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw ExprError("expression parse error at position " + std::to_string(pos_) +
                        ": " + why);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) {
    Expression e;
    e.root_ = Parser(text).parse();
    e.text_ = std::string(text);
    return e;
}

double Expression::operator()(double x) const { return root_->eval(x); }

RealFn Expression::fn() const {
    auto root = root_;
    return [root](double x) { return root->eval(x); };
}

}  // namespace qbask
