#include <doctest.h>

#include <cmath>

#include "qsolve/error.hpp"
#include "qsolve/expr.hpp"

using qsolve::Expression;

TEST_CASE("expression arithmetic") {
  CHECK(Expression::parse("x^2")(3) == 9);
  CHECK(Expression::parse("1 + 2*3")(0) == 7);
  CHECK(Expression::parse("-x^2")(3) == -9);
  CHECK(Expression::parse("2^3^2")(0) == 512);
  CHECK(Expression::parse("(1+x)/(1-x)")(0.5) == 3);
  CHECK(Expression::parse("x*x*(x*x-16) + tanh(x)")(1) == doctest::Approx(-15 + std::tanh(1.0)));
  CHECK(Expression::parse("exp(-x^2/2)")(0) == 1);
  CHECK(Expression::parse("sqrt(abs(x)) + sin(pi*x) + cos(0)")(-4) == doctest::Approx(3));
  CHECK(Expression::parse("1.5e1")(0) == 15);
  CHECK(Expression::parse("0")(2) == 0);
}

TEST_CASE("expression errors carry a position") {
  auto position = [](const char* text) {
    try {
      Expression::parse(text);
    } catch (const qsolve::ParseError& e) {
      return e.position().value_or(9999);
    }
    return std::size_t{9999};
  };
  CHECK(position("x^") == 2);
  CHECK(position("2*y") == 2);
  CHECK(position("(x+1") == 4);
  CHECK(position("x $ 1") == 2);
  CHECK(position("foo(x)") == 0);
}
