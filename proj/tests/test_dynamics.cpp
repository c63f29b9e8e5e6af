#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bkc/dynamics.hpp"
#include "oracles.hpp"

using namespace bkc;

TEST(Dynamics, MobiusFlowExample) {
  const FlowResult r = integrate_flow(mobius_generator(), {0, 1}, 0.5, 1e-3);
  ASSERT_TRUE(r.completed());
  EXPECT_NEAR(r.end.x, -0.4, 1e-8);
  EXPECT_NEAR(r.end.y, 0.8, 1e-8);
}

TEST(Dynamics, ZeroTimeReturnsStart) {
  const FlowResult r = integrate_flow(parse_field("(x*y + 3, sin(x))"), {0.3, -0.2}, 0.0);
  EXPECT_EQ(r.end, (Point{0.3, -0.2}));
  EXPECT_EQ(r.t_reached, 0.0);
}

TEST(Dynamics, ConstantFieldTranslates) {
  const FlowResult r = integrate_flow(parse_field("(0, 1)"), {1.25, -0.5}, 2.3);
  EXPECT_DOUBLE_EQ(r.end.x, 1.25);
  EXPECT_NEAR(r.end.y, 1.8, 1e-13);
  const FlowResult back = integrate_flow(parse_field("(0, 1)"), {1.25, -0.5}, -0.7);
  EXPECT_NEAR(back.end.y, -1.2, 1e-13);
}

TEST(Dynamics, StepCountAndTrajectory) {
  FlowProblem fp{parse_field("(1, 0)"), {0, 0}, 0.35, 0.1, Domain::plane(), true};
  const FlowResult r = integrate_flow(fp);
  ASSERT_EQ(r.trajectory.size(), 5u);  // start + ceil(3.5) steps
  EXPECT_NEAR(r.trajectory.back().t, 0.35, 1e-15);
  EXPECT_NEAR(r.end.x, 0.35, 1e-15);
  EXPECT_THROW(integrate_flow(FlowProblem{parse_field("(1, 0)"), {0, 0}, 1, 0, {}, false}), std::invalid_argument);
}

TEST(Dynamics, BoundaryEvent) {
  const FlowResult r = integrate_flow(FlowProblem{parse_field("(0, 1)"), {0, 0}, 3.0, 1e-3, strip_domain(), false});
  EXPECT_EQ(r.event, FlowEvent::Boundary);
  EXPECT_NEAR(r.t_reached, std::numbers::pi / 2, 2e-3);
}

TEST(Dynamics, DivergenceEvent) {
  // x' = x^2 from x = 1 blows up at t = 1
  const FlowResult r = integrate_flow(parse_field("(x^2, 0)"), {1, 0}, 2.0);
  EXPECT_EQ(r.event, FlowEvent::Divergence);
  EXPECT_NEAR(r.t_reached, 1.0, 1e-2);
  const FlowResult e = integrate_flow(parse_field("(log(x), 0)"), {0.5, 0}, 5.0);
  EXPECT_EQ(e.event, FlowEvent::Divergence);
}

TEST(Dynamics, MobiusReference) {
  const Point a = mobius_reference({0, 1}, 0.5);
  EXPECT_NEAR(a.x, -0.4, 1e-15);
  EXPECT_NEAR(a.y, 0.8, 1e-15);
  const Point b = mobius_reference({0, 2}, 0.25);
  EXPECT_NEAR(b.x, -0.8, 1e-15);
  EXPECT_NEAR(b.y, 1.6, 1e-15);
  EXPECT_EQ(mobius_reference({0.3, -2}, 0.0), (Point{0.3, -2}));
  EXPECT_THROW(mobius_reference({2, 0}, 0.5), std::invalid_argument);
  for (const Point& z : mobius_seeds(20)) {
    const Point r = mobius_reference(z, 0.7), o = oracle::mobius(z, 0.7);
    EXPECT_NEAR(r.x, o.x, 1e-12);
    EXPECT_NEAR(r.y, o.y, 1e-12);
  }
}

TEST(Dynamics, MobiusFlowMatchesOracleOnSeeds) {
  const auto seeds = mobius_seeds(20);
  ASSERT_EQ(seeds.size(), 20u);
  for (const Point& z : seeds) {
    EXPECT_GT(std::abs(1.0 - 0.5 * cplx(z.x, z.y)), 0.2);
    const FlowResult r = integrate_flow(mobius_generator(), z, 0.5, 1e-3);
    const Point o = oracle::mobius(z, 0.5);
    EXPECT_NEAR(r.end.x, o.x, 1e-8);
    EXPECT_NEAR(r.end.y, o.y, 1e-8);
  }
}

TEST(Dynamics, RK4Order) {
  for (const Point& z : mobius_seeds(5)) {
    const double ratio = mobius_flow_error(z, 0.5, 0.02) / mobius_flow_error(z, 0.5, 0.01);
    EXPECT_GE(ratio, 8.0);
    EXPECT_LE(ratio, 32.0);
  }
  EXPECT_EQ(rk4_order_check().status, Status::Pass);
}

TEST(Dynamics, FlowGroupProperty) { EXPECT_EQ(flow_group_check().status, Status::Pass); }

TEST(Dynamics, OneParameterChecks) {
  EXPECT_EQ(one_parameter_check(parse_field("(0, 1)"), catalog(1).family("translations"), Sampler::generic()).status,
            Status::Pass);
  EXPECT_EQ(one_parameter_check(parse_field("(-x, y)"), catalog(2).family("hyperbolic"), Sampler::generic()).status,
            Status::Pass);
  EXPECT_EQ(one_parameter_check(parse_field("(-x/2, y)"), catalog(3).family("hyperbolic"), Sampler::generic()).status,
            Status::Pass);
  EXPECT_EQ(one_parameter_check(parse_field("(x, 0)"), catalog(1).family("scalings"), Sampler::generic()).status,
            Status::Pass);
  Sampler near;
  near.x_min = -0.6, near.x_max = 0.6, near.y_min = -0.6, near.y_max = 0.6, near.count = 16;
  EXPECT_EQ(one_parameter_check(mobius_generator(), mobius_family(), near).status, Status::Pass);
}

TEST(Dynamics, OneParameterCheckRejectsWrongGenerator) {
  EXPECT_EQ(one_parameter_check(parse_field("(x, y)"), catalog(2).family("hyperbolic"), Sampler::generic()).status,
            Status::Fail);
}

TEST(Dynamics, GeneratorFiniteDifference) {
  // (fam(delta)(p) - p)/delta ~ V(p) at delta = 1e-6
  const AutFamily h = catalog(2).family("hyperbolic");
  for (const Point& p : Sampler::generic().points()) {
    const Point q = h.at(1e-6)(p);
    EXPECT_NEAR((q.x - p.x) / 1e-6, -p.x, 1e-4);
    EXPECT_NEAR((q.y - p.y) / 1e-6, p.y, 1e-4);
  }
}

TEST(Dynamics, StripRealField) {
  const ComplexVectorField W = strip_real_field();
  EXPECT_EQ(to_string(W.a), "x^2*cos(y)");
  EXPECT_EQ(to_string(W.b), "x*sin(y)");
  // W = Re(x e^(-iy) L1)
  const ComplexVectorField re = real_part(parse_expr("x*exp(-i*y)") * generator(1));
  EXPECT_TRUE(semantically_equal(W.a, re.a) && semantically_equal(W.b, re.b));
  // Re(x e^(iy) L1) differs in the sign of the second component
  const ComplexVectorField other = real_part(parse_expr("x*exp(i*y)") * generator(1));
  EXPECT_TRUE(semantically_equal(other.b, parse_expr("-x*sin(y)")));
  EXPECT_FALSE(relates(strip_map(), other, mobius_generator(), Sampler::generic()).equal);
}

TEST(Dynamics, StripPushforwardOfL1) {
  // u_* L1 at u(p) is (zbar, i zbar)
  for (const Point& p : strip_domain().sampler().points()) {
    const CVec v = pushforward_at(strip_map(), generator(1), p);
    const Point q = strip_map()(p);
    const cplx zbar(q.x, -q.y);
    EXPECT_LT(std::abs(v.a - zbar), 1e-12);
    EXPECT_LT(std::abs(v.b - cplx(0, 1) * zbar), 1e-12);
  }
}

TEST(Dynamics, StripFlowFromHalf) {
  const FlowResult r = integrate_flow(FlowProblem{strip_real_field(), {0.5, 0}, 1.0, 1e-3, strip_domain(), false});
  EXPECT_TRUE(r.completed());
  // x' = x^2 on y = 0: x(1) = 0.5/(1 - 0.5)
  EXPECT_NEAR(r.end.x, 1.0, 1e-9);
  EXPECT_NEAR(r.end.y, 0.0, 1e-15);
}

TEST(Dynamics, StripSeedsAreConfined) {
  const auto seeds = strip_seeds();
  ASSERT_EQ(seeds.size(), 10u);
  for (const Point& p : seeds) {
    EXPECT_GT(std::abs(std::cos(p.y) / p.x), 2.0);
    for (double t : {-2.0, 2.0}) {
      FlowProblem fp{strip_real_field(), p, t, 1e-3, strip_domain(), true};
      const FlowResult r = integrate_flow(fp);
      EXPECT_TRUE(r.completed()) << to_string(p) << " " << r.message;
      for (const auto& tp : r.trajectory) EXPECT_TRUE(strip_domain().contains(tp.p, 1e-9));
    }
  }
}

TEST(Dynamics, StripExampleCheck) {
  const auto r = strip_example_check();
  EXPECT_EQ(r.status, Status::Pass);
  EXPECT_LE(r.max_error, 1e-6);
}
