#include "doctest.h"
#include "qbask/expr.hpp"

using namespace qbask;

TEST_CASE("expression parsing and evaluation") {
    CHECK(Expression::parse("x^2-4*x+3")(2.0) == doctest::Approx(-1.0));
    CHECK(Expression::parse("(x-1/5)*(x-4/9)")(0.2) == doctest::Approx(0.0));
    CHECK(Expression::parse("2+3*4")(0.0) == doctest::Approx(14.0));
    CHECK(Expression::parse("(2+3)*4")(0.0) == doctest::Approx(20.0));
    CHECK(Expression::parse("2^3^2")(0.0) == doctest::Approx(512.0));  // right assoc
    CHECK(Expression::parse("-x^2")(2.0) == doctest::Approx(-4.0));
    CHECK(Expression::parse("6/3/2")(0.0) == doctest::Approx(1.0));
    CHECK(Expression::parse(" x + 1.5e1 ")(0.5) == doctest::Approx(15.5));
    CHECK(Expression::parse("X*x")(3.0) == doctest::Approx(9.0));
}

TEST_CASE("expression callables share the parsed tree") {
    auto e = Expression::parse("x*x+1");
    RealFn f = e.fn();
    CHECK(f(3.0) == doctest::Approx(10.0));
    CHECK(e.text() == "x*x+1");
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(Expression::parse("2+"), ExprError);
    CHECK_THROWS_AS(Expression::parse("foo"), ExprError);
    CHECK_THROWS_AS(Expression::parse("(x"), ExprError);
    CHECK_THROWS_AS(Expression::parse("x)"), ExprError);
    CHECK_THROWS_AS(Expression::parse(""), ExprError);
    CHECK_THROWS_AS(Expression::parse("1 2"), ExprError);
    try {
        Expression::parse("x+@");
    } catch (const ExprError& e) {
        CHECK(std::string(e.what()).find("position 2") != std::string::npos);
    }
}
