#include <doctest.h>

#include "cmv/errors.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace cmv;

namespace {

const ExprNode& child(const ExprNode& n, bool left = true) { return left ? *n.lhs : *n.rhs; }

Mat3 hess(const Jet2& j) { return j.hess.matrix(); }

}  // namespace

TEST_SUITE("exprfield") {

TEST_CASE("parse builds the expected trees") {
  const ScalarFieldExpr e = parse("exp(z)");
  CHECK(e.root().kind == NodeKind::Function);
  CHECK(e.root().func == Func::Exp);
  CHECK(child(e.root()).kind == NodeKind::Coordinate);
  CHECK(child(e.root()).axis == 2);

  const ScalarFieldExpr c = parse("x^2 + B*exp(-z)", {"A", "B"});
  const ExprNode& sum = c.root();
  REQUIRE(sum.kind == NodeKind::Add);
  CHECK(child(sum).kind == NodeKind::Power);
  CHECK(child(child(sum)).axis == 0);
  CHECK(child(child(sum), false).constant == 2.0);
  const ExprNode& mul = child(sum, false);
  REQUIRE(mul.kind == NodeKind::Multiply);
  CHECK(child(mul).kind == NodeKind::Parameter);
  CHECK(child(mul).name == "B");
  CHECK(child(mul, false).func == Func::Exp);
  CHECK(child(child(mul, false)).kind == NodeKind::Negate);
}

TEST_CASE("precedence and associativity") {
  CHECK(structurally_equal(parse("1 - 2 - 3"), parse("(1 - 2) - 3")));
  CHECK(structurally_equal(parse("2^3^2"), parse("2^(3^2)")));
  CHECK(structurally_equal(parse("-x^2"), parse("-(x^2)")));
  CHECK(structurally_equal(parse("x*y/z"), parse("(x*y)/z")));
  CHECK(structurally_equal(parse("x + y*z"), parse("x + (y*z)")));
  CHECK(structurally_equal(parse("2^-x"), parse("2^(-x)")));
  CHECK(eval_value(parse("2^3^2"), {}, {}) == 512.0);
  CHECK(eval_value(parse("-2^2"), {}, {}) == -4.0);
}

TEST_CASE("number literals") {
  CHECK(eval_value(parse("1.5e2"), {}, {}) == 150.0);
  CHECK(eval_value(parse(".25"), {}, {}) == 0.25);
  CHECK(eval_value(parse("3."), {}, {}) == 3.0);
  CHECK(eval_value(parse("2E-1"), {}, {}) == doctest::Approx(0.2));
}

TEST_CASE("syntax errors report offsets") {
  try {
    parse("x +");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.offset() == 3);
    CHECK(e.kind() == ErrorKind::Syntax);
  }
  for (const char* bad : {"(x", "x)", "sin x", "x ** 2", "1 2", "exp()", "x^", "3 $ 4"})
    CHECK_THROWS_AS(parse(bad), SyntaxError);
}

TEST_CASE("unknown identifiers and empty input") {
  auto kind = [](const char* src, const ParamNames& names = {}) {
    try {
      parse(src, names);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Schema;
  };
  CHECK(kind("w + 1") == ErrorKind::UnknownIdentifier);
  CHECK(kind("A*x") == ErrorKind::UnknownIdentifier);
  CHECK(kind("tan(x)") == ErrorKind::UnknownIdentifier);
  CHECK(kind("") == ErrorKind::EmptyInput);
  CHECK(kind("   ") == ErrorKind::EmptyInput);
  CHECK_NOTHROW(parse("A*x", {"A"}));
}

TEST_CASE("jet of x^2 + 2*exp(-z) at the origin") {
  const Jet2 j = eval_jet2(parse("x^2 + 2*exp(-z)"), {0, 0, 0});
  CHECK(j.value == doctest::Approx(2.0));
  CHECK((j.grad - Vec3(0, 0, -2)).norm() < 1e-15);
  Mat3 expected = Mat3::Zero();
  expected(0, 0) = 2.0;
  expected(2, 2) = 2.0;
  CHECK((hess(j) - expected).norm() < 1e-15);

  const auto fd = oracle::jet(parse("x^2 + 2*exp(-z)"), Vec3::Zero(), {});
  CHECK((fd.grad - j.grad).norm() < 1e-8);
  CHECK((fd.hess - hess(j)).norm() < 1e-5);
}

TEST_CASE("constant and exponential jets") {
  const Jet2 c = eval_jet2(parse("7"), {0.3, -1.0, 2.0});
  CHECK(c.value == 7.0);
  CHECK(c.grad.norm() == 0.0);
  CHECK(hess(c).norm() == 0.0);

  const Jet2 e = eval_jet2(parse("exp(z)"), {0, 0, 0});
  CHECK(e.value == 1.0);
  CHECK((e.grad - Vec3(0, 0, 1)).norm() == 0.0);
  Mat3 zz = Mat3::Zero();
  zz(2, 2) = 1.0;
  CHECK((hess(e) - zz).norm() == 0.0);
}

TEST_CASE("parameters bind at evaluation time") {
  const ScalarFieldExpr f = parse("A*exp(z)", {"A", "B"});
  CHECK(eval_value(f, {0, 0, 0}, {{"A", 3.0}}) == 3.0);
  CHECK(eval_value(f, {0, 0, 0}, {{"A", 5.0}}) == 5.0);
  try {
    eval_jet2(f, {0, 0, 0}, {});
    FAIL("expected unbound parameter");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnboundParameter);
  }
}

TEST_CASE("domain errors") {
  for (const char* src : {"sqrt(x - 1)", "log(x)", "1/x", "x^0.5", "(x - 1)^1.5"}) {
    CAPTURE(src);
    try {
      eval_jet2(parse(src), {0, 0, 0});
      FAIL("expected a domain error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Domain);
    }
  }
  // Integer powers are fine for negative bases.
  CHECK(eval_jet2(parse("x^3"), {-2, 0, 0}).value == -8.0);
  CHECK(eval_jet2(parse("x^-2"), {-2, 0, 0}).value == 0.25);
}

TEST_CASE("variable exponents") {
  const Jet2 j = eval_jet2(parse("x^y"), {2.0, 3.0, 0.0});
  CHECK(j.value == doctest::Approx(8.0));
  CHECK(j.grad[0] == doctest::Approx(12.0));
  CHECK(j.grad[1] == doctest::Approx(8.0 * std::log(2.0)));
}

TEST_CASE("random polynomials: jets agree with finite differences") {
  SplitMix64 rng(2024);
  for (int t = 0; t < 25; ++t) {
    const std::string src = gen::polynomial(rng);
    const ScalarFieldExpr f = parse(src);
    for (int i = 0; i < 4; ++i) {
      const Point p = uniform_point(rng, gen::kUnitCube);
      CAPTURE(src);
      const Jet2 j = eval_jet2(f, p);
      const auto fd = oracle::jet(f, p.vec(), {});
      CHECK(j.value == doctest::Approx(eval_value(f, p)).epsilon(1e-13));
      const double gscale = std::max(1.0, j.grad.cwiseAbs().maxCoeff());
      const double hscale = std::max(1.0, hess(j).cwiseAbs().maxCoeff());
      CHECK((j.grad - fd.grad).cwiseAbs().maxCoeff() / gscale < 1e-4);
      CHECK((hess(j) - fd.hess).cwiseAbs().maxCoeff() / hscale < 1e-4);
    }
  }
}

TEST_CASE("random smooth trees: jets agree with finite differences") {
  SplitMix64 rng(77);
  for (int t = 0; t < 40; ++t) {
    const std::string src = gen::smooth(rng, 4);
    const ScalarFieldExpr f = parse(src);
    const Point p = uniform_point(rng, gen::kUnitCube);
    CAPTURE(src);
    const Jet2 j = eval_jet2(f, p);
    const auto fd = oracle::jet(f, p.vec(), {});
    const double gscale = std::max(1.0, j.grad.cwiseAbs().maxCoeff());
    const double hscale = std::max(1.0, hess(j).cwiseAbs().maxCoeff());
    CHECK((j.grad - fd.grad).cwiseAbs().maxCoeff() / gscale < 1e-4);
    CHECK((hess(j) - fd.hess).cwiseAbs().maxCoeff() / hscale < 1e-4);
  }
}

TEST_CASE("product rule holds on random trees") {
  SplitMix64 rng(5);
  for (int t = 0; t < 40; ++t) {
    const std::string a = gen::smooth(rng, 3), b = gen::smooth(rng, 3);
    const Point p = uniform_point(rng, gen::kUnitCube);
    const Jet2 prod = eval_jet2(parse("(" + a + ") * (" + b + ")"), p);
    const Jet2 expect = eval_jet2(parse(a), p) * eval_jet2(parse(b), p);
    CAPTURE(a);
    CAPTURE(b);
    CHECK(std::abs(prod.value - expect.value) < 1e-12);
    CHECK((prod.grad - expect.grad).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((hess(prod) - hess(expect)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("print then parse round-trips") {
  SplitMix64 rng(99);
  for (int t = 0; t < 60; ++t) {
    const ScalarFieldExpr f = parse(t % 2 ? gen::smooth(rng, 4) : gen::polynomial(rng));
    const std::string text = print(f);
    CAPTURE(text);
    CHECK(structurally_equal(parse(text), f));
  }
  CHECK(structurally_equal(parse(print(parse("x^2 + B*exp(-z)", {"B"})), {"B"}),
                           parse("x^2 + B*exp(-z)", {"B"})));
}

TEST_CASE("hessian is stored symmetric") {
  const Jet2 j = eval_jet2(parse("sin(x*y) * exp(y - z)"), {0.2, 0.4, -0.1});
  const Mat3 h = hess(j);
  CHECK((h - h.transpose()).norm() == 0.0);
}

}  // TEST_SUITE
