#include <gtest/gtest.h>

#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/liouville.hpp"
#include "pmelab/solver.hpp"

using namespace pmelab;

namespace {

NonlinearitySpec linear_source() { return NonlinearitySpec::power_sum({{Coefficient::constant(1.0), 1.0}}, {}); }

NonlinearitySpec tangent_source() {
  return NonlinearitySpec::power_sum({{Coefficient::constant(1.0), 0.0}, {Coefficient::constant(1.0), 2.0}}, {});
}

std::vector<std::pair<double, double>> ladder(const std::function<double(double)>& m) {
  std::vector<std::pair<double, double>> out;
  for (double r = 10.0; r <= 1e6; r *= 10.0) out.push_back({r, m(r)});
  return out;
}

double u_at(const OdeResult& r, double t) {
  for (const auto& [tt, u] : r.trajectory)
    if (std::abs(tt - t) < 1e-12) return u;
  return std::nan("");
}

}  // namespace

TEST(Exponents, GrowthExponents) {
  EXPECT_NEAR(u_growth_exponent(LiouvilleTheorem::BetaAncient, 1.2, -2.0), 2.0 / (0.2 * 4.0), 1e-14);
  EXPECT_NEAR(u_growth_exponent(LiouvilleTheorem::OptimalAncient, 1.5, 0.0), 1.0, 1e-14);
  EXPECT_NEAR(v_growth_exponent(LiouvilleTheorem::BetaAncient, 1.2, -2.0), 0.5, 1e-14);
  EXPECT_NEAR(v_growth_exponent(LiouvilleTheorem::OptimalAncient, 1.5, 0.0), 0.5, 1e-14);
  for (LiouvilleTheorem th : {LiouvilleTheorem::BetaAncient, LiouvilleTheorem::OptimalAncient})
    EXPECT_EQ(parse_liouville(liouville_tag(th)), th);
}

TEST(Sign, Examples) {
  const auto u = log_uniform_samples();
  EXPECT_EQ(u.size(), 1000u);
  EXPECT_NEAR(u.front(), 1e-6, 1e-18);
  EXPECT_NEAR(u.back(), 1e6, 1e-6);

  const SignReport c = check_sign_hypothesis(LiouvilleTheorem::BetaAncient, NonlinearitySpec::constant(1.0), 1.2, -0.3, u);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.min_expression, 1.54, 1e-12);
  EXPECT_TRUE(c.equivalence_ok);

  const SignReport l = check_sign_hypothesis(LiouvilleTheorem::OptimalAncient, linear_source(), 1.5, 0.0, u);
  EXPECT_FALSE(l.holds);
  EXPECT_NEAR(l.min_expression, (1.0 - 2.0 * 1.5) * 1e6, 1e-3);
  EXPECT_TRUE(l.equivalence_ok);

  const SignReport z = check_sign_hypothesis(LiouvilleTheorem::BetaAncient, NonlinearitySpec::zero(), 1.2, -2.0, u);
  EXPECT_TRUE(z.holds);
  EXPECT_EQ(z.min_expression, 0.0);
}

TEST(Sign, EquivalenceOnNonlinearSources) {
  const auto u = log_uniform_samples(1e-3, 1e3, 200);
  for (const NonlinearitySpec& s : {tangent_source(), NonlinearitySpec::log(Coefficient::constant(0.5)), linear_source()}) {
    const SignReport r = check_sign_hypothesis(LiouvilleTheorem::BetaAncient, s, 1.2, -1.5, u);
    EXPECT_TRUE(r.equivalence_ok) << s.tag() << " " << r.equivalence_error;
    EXPECT_LE(r.equivalence_error, 1e-10);
  }
}

TEST(Ode, ClosedForms) {
  const OdeResult one = ancient_ode(NonlinearitySpec::constant(1.0), 1.0, -5.0);
  ASSERT_TRUE(one.violation_time.has_value());
  EXPECT_NEAR(*one.violation_time, -1.0, 1e-8);
  for (const auto& [t, u] : one.trajectory) EXPECT_NEAR(u, 1.0 + t, 1e-8 * std::max(1.0, std::abs(u)));

  const OdeResult ex = ancient_ode(linear_source(), 1.0, -10.0);
  EXPECT_FALSE(ex.violation_time.has_value());
  for (const auto& [t, u] : ex.trajectory) EXPECT_NEAR(u, std::exp(t), 1e-8 * std::exp(t));

  const OdeResult tn = ancient_ode(tangent_source(), 1.0, -5.0);
  ASSERT_TRUE(tn.violation_time.has_value());
  EXPECT_NEAR(*tn.violation_time, -M_PI / 4.0, 1e-8);
  EXPECT_GE(*tn.violation_time, -1.0);
  for (const auto& [t, u] : tn.trajectory) EXPECT_NEAR(u, std::tan(t + M_PI / 4.0), 1e-8 * std::max(1.0, std::abs(u)));

  const OdeResult fwd = integrate_ode(linear_source(), 2.0, 1.0);
  EXPECT_NEAR(fwd.trajectory.back().second, 2.0 * std::exp(1.0), 1e-8 * 2.0 * std::exp(1.0));
  EXPECT_TRUE(std::isnan(u_at(fwd, 17.0)));
}

TEST(Ode, SpatiallyConstantPdeMatches) {
  const GeometryContext ctx(torus_chart(1, 32), MetricField::flat(1), zero_function(), 2.0);
  SolverConfig c;
  c.p = 1.2;
  c.stepper = Stepper::RK4;
  c.t_end = 0.5;
  c.outputs = 10;
  const NonlinearitySpec s = tangent_source();
  const SpaceTimeField u = solve(ctx, ScalarField(ctx.chart(), 0.0, 1.0), s, c).u;
  for (std::size_t k = 0; k < u.frame_count(); ++k) {
    const double t = u.times()[k];
    EXPECT_NEAR(u.frame(k)[7], std::tan(t + M_PI / 4.0), 1e-6);
  }
}

TEST(Growth, Gates) {
  const double p = 1.2, beta = -2.0;
  const double e = v_growth_exponent(LiouvilleTheorem::BetaAncient, p, beta);
  EXPECT_TRUE(growth_gate(LiouvilleTheorem::BetaAncient, p, beta, ladder([](double r) { return std::log(r); })).pass);
  const GrowthReport crit =
      growth_gate(LiouvilleTheorem::BetaAncient, p, beta, ladder([e](double r) { return std::pow(r, e); }));
  EXPECT_FALSE(crit.pass);
  EXPECT_NEAR(crit.slope, 0.0, 1e-10);
  for (LiouvilleTheorem th : {LiouvilleTheorem::BetaAncient, LiouvilleTheorem::OptimalAncient}) {
    const GrowthReport b = growth_gate(th, 1.3, -1.0, ladder([](double) { return 3.0; }));
    EXPECT_TRUE(b.pass);
    EXPECT_LT(b.rungs.back().quotient, b.rungs.front().quotient);
    for (const GrowthRung& g : b.rungs) EXPECT_NEAR(g.quotient, 3.0 * std::pow(g.R, -b.exponent), 1e-12 * g.quotient);
  }
  EXPECT_THROW(growth_gate(LiouvilleTheorem::BetaAncient, p, beta, {{1.0, 1.0}, {2.0, 1.0}}), Error);
  try {
    growth_gate(LiouvilleTheorem::OptimalAncient, 1.5, 0.0, {});
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::InsufficientLadder);
  }
}

TEST(Verdict, UnitSourceHasNoAncientSolution) {
  LiouvilleCase c;
  c.theorem = LiouvilleTheorem::BetaAncient;
  c.p = 1.2;
  c.m = 2.0;
  c.beta = -2.0;
  c.spec = NonlinearitySpec::constant(1.0);
  const LiouvilleVerdict v = liouville_verdict(c);
  EXPECT_EQ(v.verdict, "no-ancient-solution");
  EXPECT_TRUE(v.exponents_ok);
  EXPECT_TRUE(v.sign.holds);
  EXPECT_TRUE(v.positivity_ok);
  ASSERT_TRUE(v.ode.violation_time.has_value());
  ASSERT_TRUE(v.bound_time.has_value());
  EXPECT_NEAR(*v.bound_time, -1.0, 1e-12);
  EXPECT_TRUE(v.bound_consistent);
}

TEST(Verdict, Soundness) {
  struct Row {
    LiouvilleTheorem th;
    double p, beta;
    NonlinearitySpec spec;
  };
  const std::vector<Row> rows = {
      {LiouvilleTheorem::BetaAncient, 1.2, -2.0, NonlinearitySpec::constant(1.0)},
      {LiouvilleTheorem::BetaAncient, 1.2, -2.0, tangent_source()},
      {LiouvilleTheorem::BetaAncient, 1.2, -2.0, linear_source()},
      {LiouvilleTheorem::BetaAncient, 1.2, -2.0, NonlinearitySpec::zero()},
      {LiouvilleTheorem::OptimalAncient, 1.3, 0.0, NonlinearitySpec::constant(0.5)},
      {LiouvilleTheorem::OptimalAncient, 1.3, 0.0, linear_source()},
      {LiouvilleTheorem::BetaAncient, 1.4, -2.0, NonlinearitySpec::constant(1.0)},
  };
  for (const Row& r : rows) {
    LiouvilleCase c;
    c.theorem = r.th;
    c.p = r.p;
    c.beta = r.beta;
    c.spec = r.spec;
    const LiouvilleVerdict v = liouville_verdict(c);
    if (v.verdict == "no-ancient-solution") {
      EXPECT_TRUE(v.exponents_ok);
      EXPECT_GE(v.sign.min_expression, -1e-12 * std::max(1.0, std::abs(v.sign.min_n)));
      EXPECT_TRUE(v.positivity_ok);
      EXPECT_TRUE(v.ode.violation_time.has_value());
    }
    if (!v.exponents_ok || !v.sign.holds || !v.positivity_ok) EXPECT_NE(v.verdict, "no-ancient-solution") << r.spec.tag();
  }
}

TEST(Verdict, TangentSourceFailsSignButStillCrossesZero) {
  LiouvilleCase c;
  c.spec = tangent_source();
  c.beta = -2.0;
  const LiouvilleVerdict v = liouville_verdict(c);
  EXPECT_EQ(v.verdict, "hypotheses-not-met");
  EXPECT_FALSE(v.sign.holds);
  ASSERT_TRUE(v.ode.violation_time.has_value());
  EXPECT_NEAR(*v.ode.violation_time, -M_PI / 4.0, 1e-6);
}

TEST(Verdict, LadderIsAttached) {
  LiouvilleCase c;
  c.beta = -2.0;
  c.ladder = ladder([](double r) { return std::log(r); });
  const LiouvilleVerdict v = liouville_verdict(c);
  ASSERT_TRUE(v.growth.has_value());
  EXPECT_TRUE(v.growth->pass);
}
