#include <cmath>

#include "rhc/errors.hpp"
#include "rhc/expression.hpp"
#include "support.hpp"

using namespace rhc;

namespace {

Complex eval(const char* text, Complex z, const ExpressionContext& ctx = {}) { return Expression::parse(text, ctx)(z); }

}  // namespace

TEST_CASE("documented expression examples") {
  CHECK(std::abs(eval("z^3", 2.0) - 8.0) < 1e-15);
  CHECK(std::abs(eval("conj(z)", kI) + kI) < 1e-15);
  for (int k = 0; k < 16; ++k) {
    const Complex z = std::polar(1.0, 2.0 * kPi * k / 16);
    CHECK(std::abs(eval("(1 - 0.09*z*conj(z))", z) - 0.91) < 1e-15);
  }
}

TEST_CASE("precedence and associativity") {
  CHECK(std::abs(eval("1 + 2*3", 0.0) - 7.0) == 0.0);
  CHECK(std::abs(eval("2^3^2", 0.0) - 512.0) == 0.0);
  CHECK(std::abs(eval("-z^2", 3.0) + 9.0) == 0.0);
  CHECK(std::abs(eval("(-z)^2", 3.0) - 9.0) == 0.0);
  CHECK(std::abs(eval("8/4/2", 0.0) - 1.0) == 0.0);
  CHECK(std::abs(eval("2*-3", 0.0) + 6.0) == 0.0);
  CHECK(std::abs(eval("z^-2", 2.0) - 0.25) == 0.0);
}

TEST_CASE("literals, constants and builtins") {
  CHECK(std::abs(eval("2.5i", 0.0) - Complex(0.0, 2.5)) == 0.0);
  CHECK(std::abs(eval("1e-3", 0.0) - 1e-3) == 0.0);
  CHECK(std::abs(eval("i*i", 0.0) + 1.0) == 0.0);
  CHECK(std::abs(eval("exp(i*pi)", 0.0) + 1.0) < 1e-15);
  CHECK(std::abs(eval("abs(z)", Complex(3.0, 4.0)) - 5.0) < 1e-15);
  CHECK(std::abs(eval("re(z) + im(z)", Complex(3.0, 4.0)) - 7.0) == 0.0);
  CHECK(std::abs(eval("sqrt(z)", -4.0) - Complex(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(eval("log(z)", std::exp(1.0)) - 1.0) < 1e-15);
  CHECK(std::abs(eval("sin(z)^2 + cos(z)^2", Complex(0.3, 0.2)) - 1.0) < 1e-15);

  ExpressionContext ctx;
  ctx.constants["a"] = Complex(0.4, 0.1);
  ctx.functions["r"] = [](Complex z) { return 0.3 * z; };
  CHECK(std::abs(eval("(z - a)*r(conj(z))", 2.0, ctx) - (2.0 - Complex(0.4, 0.1)) * 0.6) < 1e-15);
}

TEST_CASE("property: integer powers are exact products") {
  test::Gen gen(21);
  for (int trial = 0; trial < 100; ++trial) {
    const Complex z = gen.complex_in_box(2.0);
    const int k = gen.integer(-6, 6);
    if (k < 0 && std::abs(z) < 1e-3) continue;
    Complex want = 1.0;
    for (int i = 0; i < std::abs(k); ++i) want *= z;
    if (k < 0) want = 1.0 / want;
    const std::string text = "z^" + std::string(k < 0 ? "(" : "") + std::to_string(k) + (k < 0 ? ")" : "");
    CHECK(std::abs(Expression::parse(text)(z) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("parse errors carry a position") {
  try {
    (void)Expression::parse("1 + * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
  }
  CHECK_THROWS_AS(Expression::parse("foo(z)"), ParseError);
  CHECK_THROWS_AS(Expression::parse("q + 1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("(z + 1"), ParseError);
  CHECK_THROWS_AS(Expression::parse("z z"), ParseError);
  CHECK_THROWS_AS(Expression::parse(""), ParseError);
}

TEST_CASE("evaluation errors") {
  CHECK_THROWS_AS(eval("1/z", 0.0), EvalError);
  CHECK_THROWS_AS(eval("log(z)", 0.0), EvalError);
  CHECK_THROWS_AS(eval("z^-1", 0.0), EvalError);
  CHECK_THROWS_AS(eval("exp(z)", 1000.0), EvalError);
}

TEST_CASE("dependence on z and matrix expressions") {
  CHECK_FALSE(Expression::parse("2 + pi").depends_on_z());
  CHECK(Expression::parse("conj(z)").depends_on_z());
  const MatrixExpression m = MatrixExpression::parse({{"1", "z"}, {"0", "2"}});
  CHECK(m.dim() == 2);
  CHECK(m.depends_on_z());
  const Matrix v = m(3.0);
  CHECK(std::abs(v(0, 1) - 3.0) == 0.0);
  CHECK(std::abs(v(1, 1) - 2.0) == 0.0);
  CHECK_THROWS_AS(MatrixExpression::parse({{"1", "2"}}), InvalidArgumentError);
}
