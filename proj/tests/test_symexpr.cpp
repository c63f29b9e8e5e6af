#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bkc/diff.hpp"
#include "bkc/parse.hpp"
#include "bkc/print.hpp"
#include "bkc/random_expr.hpp"
#include "bkc/semantic.hpp"
#include "bkc/simplify.hpp"
#include "oracles.hpp"

using namespace bkc;

namespace {

const Sampler kPositive = Sampler::right_half(0.1, 3.0);

Sampler range(double x0, double x1, double y0 = -3.0, double y1 = 3.0) {
  Sampler s;
  s.x_min = x0;
  s.x_max = x1;
  s.y_min = y0;
  s.y_max = y1;
  s.z_exclusion = 0.0;
  return s;
}

}  // namespace

TEST(Parse, Variable) {
  const Expr e = parse_expr("x");
  ASSERT_EQ(e.op(), Op::Var);
  EXPECT_EQ(e.variable(), Var::X);
}

TEST(Parse, ProductWithImaginaryExponent) {
  const Expr e = parse_expr("x*exp(i*y)");
  ASSERT_EQ(e.op(), Op::Mul);
  EXPECT_EQ(e.arg(0).op(), Op::Var);
  ASSERT_EQ(e.arg(1).op(), Op::Exp);
  const Expr& inner = e.arg(1).arg(0);
  ASSERT_EQ(inner.op(), Op::Mul);
  EXPECT_EQ(inner.arg(0).op(), Op::I);
  EXPECT_EQ(inner.arg(1).variable(), Var::Y);
}

TEST(Parse, PreSubstitutedK) {
  const Expr e = parse_expr("y + 1/((k-1)*x^(k-1))", {.k = 2});
  EXPECT_TRUE(semantically_equal(e, parse_expr("y + 1/x")));
  EXPECT_TRUE(structurally_equal(simplify(e), simplify(parse_expr("y + 1/x"))));
}

TEST(Parse, Precedence) {
  // ^ over * / over + -, ^ right-associative
  EXPECT_NEAR(eval_at(parse_expr("2^3^2"), 0, 0).real(), 512.0, 1e-9);
  EXPECT_NEAR(eval_at(parse_expr("1 + 2*3^2"), 0, 0).real(), 19.0, 1e-12);
  EXPECT_NEAR(eval_at(parse_expr("8/4/2"), 0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(eval_at(parse_expr("1 - 2 - 3"), 0, 0).real(), -4.0, 1e-12);
  // unary minus binds tighter than *, looser than ^
  EXPECT_NEAR(eval_at(parse_expr("-x^2"), 3, 0).real(), -9.0, 1e-12);
  EXPECT_NEAR(eval_at(parse_expr("2*-x"), 3, 0).real(), -6.0, 1e-12);
  EXPECT_NEAR(eval_at(parse_expr("x^-2"), 2, 0).real(), 0.25, 1e-12);
  const Expr neg_mul = parse_expr("-x*y");
  ASSERT_EQ(neg_mul.op(), Op::Mul);
  EXPECT_EQ(neg_mul.arg(0).op(), Op::Neg);
}

TEST(Parse, LiteralsAndWhitespace) {
  EXPECT_DOUBLE_EQ(eval_at(parse_expr(" 1.5e-3 "), 0, 0).real(), 1.5e-3);
  EXPECT_DOUBLE_EQ(eval_at(parse_expr("3/4"), 0, 0).real(), 0.75);
  EXPECT_NEAR(eval_at(parse_expr("2*e"), 0, 0).real(), 2 * std::numbers::e, 1e-15);
  EXPECT_NEAR(eval_at(parse_expr("ifpos(x, 1, 2)"), 1, 0).real(), 1.0, 0);
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    parse_expr("x + * y");
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 4u);
  }
  try {
    parse_expr("x + foo");
    FAIL() << "expected ParseError";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.position(), 4u);
    EXPECT_NE(std::string(err.what()).find("unknown identifier"), std::string::npos);
  }
  EXPECT_THROW(parse_expr("(x"), ParseError);
  EXPECT_THROW(parse_expr("exp x"), ParseError);
  EXPECT_THROW(parse_expr("ifpos(x, 1)"), ParseError);
  EXPECT_THROW(parse_expr("k"), ParseError);
  EXPECT_THROW(parse_expr("w"), ParseError);
  EXPECT_THROW(parse_expr("x $ y"), ParseError);
  EXPECT_THROW(parse_expr(""), ParseError);
}

TEST(Parse, EntireVariable) {
  const Expr e = parse_expr("exp(w)", {.k = std::nullopt, .allow_w = true});
  const cplx v = eval_at(e, 0.3, 1.1);
  EXPECT_NEAR(std::abs(v - std::exp(cplx(0.3, 1.1))), 0.0, 1e-14);
}

TEST(Differentiate, PowerRule) {
  const Expr d = differentiate(parse_expr("x^3"), Var::X);
  EXPECT_TRUE(structurally_equal(simplify(d), simplify(parse_expr("3*x^2"))));
}

TEST(Differentiate, ChainRule) {
  const Expr d = differentiate(parse_expr("x*exp(i*y)"), Var::Y);
  EXPECT_TRUE(simplifies_to_zero(d - parse_expr("i*x*exp(i*y)")));
}

TEST(Differentiate, Log) {
  const Expr d = differentiate(parse_expr("log(x)"), Var::X);
  EXPECT_TRUE(semantically_equal(d, parse_expr("1/x"), kPositive));
  EXPECT_TRUE(structurally_equal(simplify(d), simplify(parse_expr("x^(-1)"))));
}

TEST(Differentiate, IfPosBranchwise) {
  const Expr f = parse_expr("ifpos(x, x^2, -x)");
  const Expr d = differentiate(f, Var::X);
  EXPECT_NEAR(eval_at(d, 2, 0).real(), 4.0, 1e-12);
  EXPECT_NEAR(eval_at(d, -2, 0).real(), -1.0, 1e-12);
}

TEST(Differentiate, ParameterT) {
  const Expr d = differentiate(parse_expr("exp(-t)*x"), Var::T);
  EXPECT_NEAR(eval_at(d, 2.0, 0.0, 0.0).real(), -2.0, 1e-12);
}

TEST(Eval, Examples) {
  const Expr u = parse_expr("x*exp(i*y)");
  EXPECT_NEAR(std::abs(eval_at(u, 1, std::numbers::pi / 2) - cplx(0, 1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval_at(u, 2, 0) - cplx(2, 0)), 0.0, 0.0);
  EXPECT_NEAR(std::abs(eval_at(parse_expr("log(x) + i*y"), std::numbers::e, 1) - cplx(1, 1)), 0.0, 1e-15);
}

TEST(Eval, DomainErrorsAreReported) {
  EXPECT_THROW(eval_at(parse_expr("log(x)"), -1, 0), EvalError);
  EXPECT_THROW(eval_at(parse_expr("log(x)"), 0, 0), EvalError);
  EXPECT_THROW(eval_at(parse_expr("1/x"), 0, 0), EvalError);
  EXPECT_THROW(eval_at(parse_expr("x^0.5"), -2, 0), EvalError);
  EXPECT_THROW(eval_at(parse_expr("exp(x)"), 1000, 0), EvalError);
  EXPECT_THROW(eval_at(parse_expr("sqrt(x)"), -1, 0), EvalError);
  // integer powers of negative reals are fine
  EXPECT_NEAR(eval_at(parse_expr("x^3"), -2, 0).real(), -8.0, 0);
  EXPECT_NEAR(eval_at(parse_expr("x^(-1)"), -2, 0).real(), -0.5, 0);
}

TEST(Eval, IfPosIsStrictAndLazy) {
  const Expr f = parse_expr("ifpos(x, log(x), 0)");
  EXPECT_EQ(eval_at(f, 0, 0), cplx(0));
  EXPECT_EQ(eval_at(f, -1, 0), cplx(0));
  EXPECT_NEAR(eval_at(f, std::numbers::e, 0).real(), 1.0, 1e-15);
}

TEST(Simplify, Cancellation) {
  EXPECT_TRUE(simplify(parse_expr("x*exp(i*y) - x*exp(i*y)")).is_zero());
}

TEST(Simplify, ExpLog) {
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("exp(log(x))")), Expr::x()));
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("log(exp(x))")), Expr::x()));
  // log(exp(i*y)) is not y in general; it must not be rewritten
  EXPECT_FALSE(structurally_equal(simplify(parse_expr("log(exp(i*y))")), simplify(parse_expr("i*y"))));
}

TEST(Simplify, BHolomorphicResidualOfU) {
  const Expr u = parse_expr("x*exp(i*y)");
  const Expr l1u = Expr::x() * differentiate(u, Var::X) * Expr::real(1.0) + Expr::i() * differentiate(u, Var::Y);
  EXPECT_TRUE(simplify(l1u).is_zero());
}

TEST(Simplify, PowerCollection) {
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("x*x*x")), simplify(parse_expr("x^3"))));
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("x^2/x")), Expr::x()));
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("(x*y)^2")), simplify(parse_expr("x^2*y^2"))));
  EXPECT_TRUE(simplify(parse_expr("exp(i*y)^3 - exp(3*i*y)")).is_zero());
  EXPECT_TRUE(simplify(parse_expr("exp(x)*exp(i*y) - exp(x + i*y)")).is_zero());
}

TEST(Simplify, PositivityGatedRewrites) {
  const Expr e = parse_expr("(4*x^(-2))^(-0.5)");
  EXPECT_TRUE(structurally_equal(simplify(e, Assumptions::right_half_plane()), parse_expr("0.5*x")));
  // without x > 0 the half power cannot distribute
  EXPECT_FALSE(structurally_equal(simplify(e), parse_expr("0.5*x")));
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("log(x^3)"), Assumptions::right_half_plane()),
                                 parse_expr("3*log(x)")));
}

TEST(Simplify, IfPos) {
  EXPECT_TRUE(simplify(parse_expr("ifpos(x, x - x, 0)")).is_zero());
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("ifpos(1, x, y)")), Expr::x()));
  EXPECT_TRUE(structurally_equal(simplify(parse_expr("ifpos(0, x, y)")), Expr::y()));
}

TEST(Semantic, Examples) {
  EXPECT_TRUE(semantically_equal(parse_expr("exp(log(x))"), Expr::x(), range(0.1, 10)));
  EXPECT_FALSE(semantically_equal(Expr::x(), -Expr::x(), range(0.1, 10)));
  EXPECT_TRUE(semantically_equal(parse_expr("sin(x)^2 + cos(x)^2"), Expr::real(1.0)));
}

TEST(Semantic, DomainFailureNamesThePoint) {
  try {
    (void)semantically_equal(parse_expr("log(x)"), Expr::x(), range(-1, 1));
    FAIL();
  } catch (const SampleError& err) {
    EXPECT_LE(err.point().x, 0.0);
  }
}

TEST(Sampler, Reproducible) {
  Sampler s = Sampler::near_z(42);
  const auto a = s.points();
  const auto b = s.points();
  ASSERT_EQ(a.size(), 64u);
  EXPECT_EQ(a, b);
  s.seed = 43;
  EXPECT_NE(a, s.points());
}

TEST(Sampler, RespectsConstraints) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Sampler s = Sampler::near_z(seed);
    bool left = false, right = false, reached = false;
    for (const auto& p : s.points()) {
      EXPECT_GE(std::abs(p.x), s.z_exclusion);
      EXPECT_LE(std::abs(p.x), 3.0);
      EXPECT_GE(p.y, -3.0);
      EXPECT_LE(p.y, 3.0);
      left = left || p.x < 0;
      right = right || p.x > 0;
      reached = reached || std::abs(p.x) <= 1e-4;
    }
    EXPECT_TRUE(left && right && reached);

    Sampler pos = Sampler::right_half(0.5, 2.0, seed);
    for (const auto& p : pos.points()) {
      EXPECT_GE(p.x, 0.5);
      EXPECT_LE(p.x, 2.0);
    }
  }
}

TEST(Grid, ParseAndEnumerate) {
  const Grid g = Grid::parse("-2:2:1,-3:3:0.5");
  const auto pts = g.points();
  EXPECT_EQ(pts.size(), 5u * 13u);
  EXPECT_EQ(pts.front(), (Point{-2, -3}));
  EXPECT_EQ(pts.back(), (Point{2, 3}));
  EXPECT_THROW(Grid::parse("1:2"), std::invalid_argument);
  EXPECT_THROW(Grid::parse("1:2:0,0:1:1"), std::invalid_argument);
}

// ---- properties over random trees ----

TEST(Property, PrintParseRoundTrip) {
  RandomExpr gen(0);
  for (int n = 0; n < 1000; ++n) {
    const Expr e = gen.next_evaluable(kPositive);
    const std::string text = to_string(e);
    Expr back;
    ASSERT_NO_THROW(back = parse_expr(text)) << text;
    const auto cmp = compare_on(back, e, kPositive, 1e-10);
    ASSERT_TRUE(cmp.equal) << text << " err " << cmp.max_error;
  }
}

TEST(Property, DerivativeMatchesFiniteDifference) {
  RandomExpr gen(1);
  const auto pts = Sampler::right_half(0.3, 2.5, 5).points();
  for (int n = 0; n < 300; ++n) {
    const Expr e = gen.next_evaluable(kPositive);
    for (Var v : {Var::X, Var::Y}) {
      const Expr d = differentiate(e, v);
      for (std::size_t k = 0; k < 8; ++k) {
        const Point p = pts[k];
        const cplx exact = eval_at(d, p.x, p.y);
        const cplx fd = oracle::central_difference(e, v, p, 1e-6);
        ASSERT_LE(std::abs(exact - fd), 1e-5 * (1.0 + std::abs(exact))) << to_string(e) << " d/" << var_name(v);
      }
    }
  }
}

TEST(Property, SimplifyPreservesSemantics) {
  RandomExpr gen(2);
  for (int n = 0; n < 500; ++n) {
    const Expr e = gen.next_evaluable(kPositive);
    const Expr s = simplify(e);
    const Expr sp = simplify(e, Assumptions::right_half_plane());
    auto cmp = compare_on(s, e, kPositive, 1e-9);
    ASSERT_TRUE(cmp.equal) << to_string(e) << "\n -> " << to_string(s) << " err " << cmp.max_error;
    cmp = compare_on(sp, e, kPositive, 1e-9);
    ASSERT_TRUE(cmp.equal) << to_string(e) << "\n -> " << to_string(sp) << " err " << cmp.max_error;
  }
}

TEST(Property, DerivativeIsLinear) {
  RandomExpr gen(3);
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    const Expr e1 = gen.next_evaluable(kPositive);
    const Expr e2 = gen.next_evaluable(kPositive);
    const Expr a = Expr::constant({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    const Expr b = Expr::constant({rng.uniform(-2, 2), rng.uniform(-2, 2)});
    const Expr lhs = differentiate(a * e1 + b * e2, Var::X);
    const Expr rhs = a * differentiate(e1, Var::X) + b * differentiate(e2, Var::X);
    ASSERT_TRUE(semantically_equal(lhs, rhs, kPositive));
  }
}
