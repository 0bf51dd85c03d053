#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pmelab/corollary.hpp"
#include "pmelab/error.hpp"
#include "pmelab/estimates.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/solver.hpp"
#include "pmelab/superflow.hpp"

using namespace pmelab;

namespace {

GeometryContext torus1(int n) { return GeometryContext(torus_chart(1, n), MetricField::flat(1), zero_function(), 2.0); }

SpaceTimeField heat_like(const GeometryContext& ctx, double p, double t_end = 1.0) {
  SolverConfig c;
  c.p = p;
  c.stepper = Stepper::RK4;
  c.t_end = t_end;
  c.outputs = 8;
  const ScalarField u0 = ScalarField::sample(ctx.chart(), 0.0, [](const Vec3& x) { return 1.0 + 0.5 * std::sin(x[0]); });
  return solve(ctx, u0, NonlinearitySpec::zero(), c).u;
}

double term(const std::vector<RhsTerm>& terms, const std::string& name) {
  for (const RhsTerm& t : terms)
    if (t.name == name) return t.value;
  ADD_FAILURE() << "no term " << name;
  return 0.0;
}

RhsInputs busy_inputs() {
  RhsInputs in;
  in.p = 1.2;
  in.beta = -2.0;
  in.M = 3.0;
  in.k = 0.4;
  in.h = 0.3;
  in.R = 2.0;
  in.T = 1.5;
  in.t0 = 2.0;
  in.t = 1.7;
  in.sup_sigma_x = 0.6;
  in.sup_sigma_v = 0.8;
  return in;
}

const Theorem kAll[] = {Theorem::BetaLocal,    Theorem::BetaGlobal,    Theorem::BetaStatic,
                        Theorem::OptimalLocal, Theorem::OptimalGlobal, Theorem::OptimalStatic};

}  // namespace

TEST(Pressure, Examples) {
  EXPECT_DOUBLE_EQ(pressure_of(3.0, 2.0), 6.0);
  EXPECT_DOUBLE_EQ(pressure_of(1.0, 2.0), 2.0);
  EXPECT_NEAR(pressure_of(4.0, 1.5), 6.0, 1e-14);
  EXPECT_NEAR(density_of(6.0, 1.5), 4.0, 1e-13);
  EXPECT_THROW(pressure_of(0.0, 2.0), Error);
  EXPECT_THROW(pressure_of(-1.0, 2.0), Error);
}

TEST(Pressure, ScaleCovariance) {
  const Chart chart = torus_chart(1, 16);
  const ScalarField u = ScalarField::sample(chart, 0.0, [](const Vec3& x) { return 1.2 + std::cos(x[0]) * 0.7; });
  for (double p : {1.2, 1.5, 2.0, 3.0})
    for (double lam : {0.5, 2.0, 7.0}) {
      const ScalarField v = pressure_transform(u, p);
      const ScalarField vl = pressure_transform(map_field(u, [lam](double x) { return lam * x; }), p);
      for (std::size_t q = 0; q < u.size(); ++q) EXPECT_NEAR(vl[q], std::pow(lam, p - 1.0) * v[q], 1e-13 * vl[q]);
    }
}

TEST(Sigma, Examples) {
  const Vec3 x{0.3, 0, 0};
  const SigmaValues z = sigma_from_nonlinearity(NonlinearitySpec::zero(), 2.0, 0.0, x, 5.0);
  EXPECT_EQ(z.sigma, 0.0);
  EXPECT_EQ(z.sigma_v, 0.0);
  EXPECT_EQ(z.sigma_x[0], 0.0);

  const double e = std::exp(1.0);
  const SigmaValues l = sigma_from_nonlinearity(NonlinearitySpec::log(Coefficient::constant(1.0)), 2.0, 0.0, x, 2.0 * e);
  EXPECT_NEAR(l.sigma, 2.0 * e, 1e-12);

  const SigmaValues c = sigma_from_nonlinearity(NonlinearitySpec::constant(0.7), 2.0, 0.0, x, 2.0);
  EXPECT_NEAR(c.sigma, 1.4, 1e-14);
  EXPECT_NEAR(c.sigma_v, 0.0, 1e-14);
  EXPECT_THROW(sigma_from_nonlinearity(NonlinearitySpec::constant(1.0), 2.0, 0.0, x, 0.0), Error);
}

TEST(Sigma, SpatialGradient) {
  // N = (1 + 0.5 sin x) u^2 at p = 1.5: Sigma_x = p u^{p-2} * 0.5 cos x * u^2
  const NonlinearitySpec s = NonlinearitySpec::power_sum({{Coefficient{1.0, 0.5, 0, 1.0}, 2.0}}, {});
  const double p = 1.5, u = 2.0, xx = 0.8;
  const SigmaValues r = sigma_from_nonlinearity(s, p, 0.0, {xx, 0, 0}, pressure_of(u, p));
  EXPECT_NEAR(r.sigma_x[0], p * std::pow(u, p - 2.0) * 0.5 * std::cos(xx) * u * u, 1e-12);
  EXPECT_NEAR(r.sigma_v, (p - 2.0) * (1.0 + 0.5 * std::sin(xx)) * u + 2.0 * (1.0 + 0.5 * std::sin(xx)) * u, 1e-12);
}

TEST(BetaRange, Examples) {
  const BetaRange r = beta_admissible_range(1.2, 2.0);
  EXPECT_NEAR(r.beta1, -2.0 - std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(r.beta2, -2.0 + std::sqrt(3.0), 1e-12);
  for (double b : {r.beta1, r.beta2}) EXPECT_LT(std::abs(b * b + 4.0 * b + 1.0), 1e-12);
  EXPECT_NEAR(r.midpoint, -2.0, 1e-14);
  EXPECT_THROW(beta_admissible_range(1.0 + 1.0 / (std::sqrt(4.0) + 1.0), 2.0), Error);
  EXPECT_THROW(beta_admissible_range(1.4, 2.0), Error);
  try {
    beta_admissible_range(1.4, 2.0);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ExponentOutOfRange);
  }
}

TEST(BetaRange, MidpointInsideOnHundredSamples) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> um(1.0, 12.0), frac(0.001, 0.999);
  for (int i = 0; i < 100; ++i) {
    const double m = um(rng);
    const double p = 1.0 + frac(rng) * (first_family_p_limit(m) - 1.0);
    const BetaRange r = beta_admissible_range(p, m);
    EXPECT_LT(r.beta1, r.midpoint) << p << " " << m;
    EXPECT_LT(r.midpoint, r.beta2) << p << " " << m;
    EXPECT_LT(r.beta2, 0.0);
    EXPECT_TRUE(beta_admissible(p, m, r.midpoint));
    EXPECT_FALSE(beta_admissible(p, m, r.beta2));
  }
}

TEST(WField, Examples) {
  const GeometryContext ctx = torus1(64);
  const GridGeometry geo = GridGeometry::build(ctx, 0.0);
  const ScalarField c(ctx.chart(), 0.0, 3.0);
  const ScalarField w0 = w_field(geo, c, -1.0);
  for (std::size_t q = 0; q < w0.size(); ++q) EXPECT_NEAR(w0[q], 0.0, 1e-20);

  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const GeometryContext c2 = torus1(n);
    const GridGeometry g2 = GridGeometry::build(c2, 0.0);
    const ScalarField v = ScalarField::sample(c2.chart(), 0.0, [](const Vec3& x) { return 2.0 + std::sin(x[0]); });
    const ScalarField w = w_field(g2, v, 0.0);
    double e = 0.0;
    for (std::size_t q = 0; q < w.size(); ++q) {
      const double x = c2.chart().point(q)[0];
      e = std::max(e, std::abs(w[q] - std::cos(x) * std::cos(x)));
    }
    err.push_back(e);
  }
  EXPECT_GT(std::log2(err[0] / err[1]), 3.5);
  EXPECT_GT(std::log2(err[1] / err[2]), 3.5);

  // beta = -1/(p-1) at p = 2: w = v |grad v|^2, so v = 2 + sin x gives 2 at x = 0
  const ScalarField v = ScalarField::sample(ctx.chart(), 0.0, [](const Vec3& x) { return 2.0 + std::sin(x[0]); });
  const ScalarField w = w_field(geo, v, -1.0);
  for (std::size_t q = 0; q < w.size(); ++q) {
    const double x = ctx.chart().point(q)[0];
    EXPECT_NEAR(w[q], (2.0 + std::sin(x)) * std::cos(x) * std::cos(x), 1e-4);
  }
  EXPECT_THROW(w_field(geo, ScalarField(ctx.chart(), 0.0, 0.0), 0.0), Error);
}

TEST(Superflow, Examples) {
  {
    const GeometryContext ctx = torus1(16);
    const ScalarField v = ScalarField::sample(ctx.chart(), 0.0, [](const Vec3& x) { return 2.0 + std::sin(x[0]); });
    const ScalarField m = superflow_margin(ctx, v, 1.5, 0.0);
    for (std::size_t q = 0; q < m.size(); ++q) EXPECT_NEAR(m[q], 0.0, 1e-14);
  }
  {
    const GeometryContext ctx(torus_chart(2, 8), MetricField::conformal_time(2, -0.5), zero_function(), 3.0);
    const ScalarField v(ctx.chart(), 0.4, 1.3);
    const ScalarField m = superflow_margin(ctx, v, 1.5, 1.0);
    for (std::size_t q = 0; q < m.size(); ++q) EXPECT_NEAR(m[q], 0.5, 1e-12);
  }
  {
    const GeometryContext ctx(box_chart({-1.0}, {1.0}, 16, Topology::Bounded), MetricField::flat(1),
                              linear_function({1.0, 0, 0}), 3.0);
    const ScalarField v(ctx.chart(), 0.0, 4.0);
    const ScalarField m = superflow_margin(ctx, v, 2.0, 2.0);
    for (std::size_t q = 0; q < m.size(); ++q) EXPECT_NEAR(m[q], 0.0, 1e-12);
  }
}

TEST(Superflow, SufficientKappaKeepsMarginNonnegative) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "conformal-space";
  s.metric_amp = 0.2;
  s.potential = "sine-product";
  s.potential_amp = 0.4;
  s.m = 4;
  const GeometryContext ctx = s.build(16);
  const CurvatureReport rep = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 16, 2));
  const double p = 1.3;
  const ScalarField u =
      ScalarField::sample(ctx.chart(), 0.0, [](const Vec3& x) { return 1.0 + 0.6 * std::sin(x[0]) * std::cos(x[1]); });
  const double kappa = sufficient_kappa(rep, p, u.max());
  const ScalarField m = superflow_margin(ctx, pressure_transform(u, p), p, kappa);
  for (std::size_t q = 0; q < m.size(); ++q) EXPECT_GE(m[q], -1e-8 * std::max(1.0, kappa));
}

TEST(Rhs, DocumentedExamples) {
  RhsInputs in;
  in.p = 1.2;
  in.beta = -2.0;
  in.M = 1.0;
  in.R = 2.0;
  in.T = 1.0;
  in.t0 = 1.0;
  in.t = 1.0;
  EXPECT_NEAR(rhs_total(rhs_terms(Theorem::BetaStatic, in)), 1.5, 1e-14);

  in.t = 0.75;
  EXPECT_NEAR(rhs_total(rhs_terms(Theorem::BetaLocal, in)), 0.5 + 1.0 / std::sqrt(0.75), 1e-14);

  RhsInputs o;
  o.p = 1.5;
  o.M = 16.0;
  o.R = 4.0;
  o.T = 4.0;
  o.t0 = 4.0;
  o.t = 4.0;
  EXPECT_NEAR(rhs_total(rhs_terms(Theorem::OptimalStatic, o)), 96.0, 1e-12);
}

TEST(Rhs, TermsNonnegativeAndSum) {
  for (Theorem th : kAll) {
    RhsInputs in = busy_inputs();
    if (!is_beta_family(th)) in.p = 1.5;
    const auto terms = rhs_terms(th, in);
    double sum = 0.0;
    for (const RhsTerm& t : terms) {
      EXPECT_GE(t.value, 0.0) << theorem_tag(th) << " " << t.name;
      sum += t.value;
    }
    EXPECT_DOUBLE_EQ(sum, rhs_total(terms));
    EXPECT_EQ(terms.size(), is_static(th) ? 4u : 5u);
  }
}

TEST(Rhs, TogglingZeroesExactlyItsTerms) {
  for (Theorem th : {Theorem::BetaLocal, Theorem::OptimalLocal}) {
    RhsInputs in = busy_inputs();
    if (!is_beta_family(th)) in.p = 1.5;
    const auto base = rhs_terms(th, in);

    RhsInputs h0 = in;
    h0.h = 0.0;
    const auto th0 = rhs_terms(th, h0);
    EXPECT_EQ(term(th0, "sqrt_h"), 0.0);
    for (const char* n : {"curvature", "time", "sigma_x", "sigma_v"}) EXPECT_EQ(term(th0, n), term(base, n));

    RhsInputs s0 = in;
    s0.sup_sigma_x = 0.0;
    s0.sup_sigma_v = 0.0;
    const auto ts0 = rhs_terms(th, s0);
    EXPECT_EQ(term(ts0, "sigma_x"), 0.0);
    EXPECT_EQ(term(ts0, "sigma_v"), 0.0);
    for (const char* n : {"sqrt_h", "curvature", "time"}) EXPECT_EQ(term(ts0, n), term(base, n));

    RhsInputs k0 = in;
    k0.k = 0.0;
    const double mb = is_beta_family(th) ? std::pow(in.M, 1.0 - in.beta / 2.0) : std::pow(in.M, 2.0);
    EXPECT_NEAR(term(rhs_terms(th, k0), "curvature"), mb / in.R, 1e-13);
  }
}

TEST(Rhs, MonotoneInInputs) {
  for (Theorem th : kAll) {
    RhsInputs in = busy_inputs();
    if (!is_beta_family(th)) in.p = 1.5;
    const double base = rhs_total(rhs_terms(th, in));
    for (int which = 0; which < 4; ++which) {
      RhsInputs up = in;
      if (which == 0) up.h *= 2.0;
      if (which == 1) up.k *= 2.0;
      if (which == 2) up.M *= 2.0;
      if (which == 3) up.sup_sigma_x *= 2.0;
      EXPECT_GE(rhs_total(rhs_terms(th, up)), base) << theorem_tag(th) << " input " << which;
    }
  }
}

TEST(Rhs, EmptyCylinderTime) {
  RhsInputs in;
  in.t = in.t0 - in.T;
  EXPECT_THROW(rhs_terms(Theorem::BetaLocal, in), Error);
}

TEST(Estimate, ExponentChecks) {
  EXPECT_THROW(check_estimate_exponents(Theorem::BetaStatic, 1.2, 2.0, -0.1), Error);
  EXPECT_NO_THROW(check_estimate_exponents(Theorem::BetaStatic, 1.2, 2.0, -2.0));
  EXPECT_THROW(check_estimate_exponents(Theorem::OptimalStatic, 2.5, 2.0, 0.0), Error);
  EXPECT_NO_THROW(check_estimate_exponents(Theorem::OptimalStatic, 1.5, 2.0, 0.0));
  for (Theorem th : kAll) EXPECT_EQ(parse_theorem(theorem_tag(th)), th);
  EXPECT_THROW(parse_theorem("nope"), Error);
}

TEST(Estimate, LhsFormulas) {
  EXPECT_NEAR(estimate_lhs(Theorem::BetaLocal, 1.2, -2.0, 4.0, 3.0), 3.0 * 4.0, 1e-14);
  EXPECT_NEAR(estimate_lhs(Theorem::OptimalLocal, 1.5, 0.0, 4.0, 3.0), 4.0 * 3.0, 1e-14);
}

TEST(Estimate, ConstantSolutionCalibratesToZero) {
  const GeometryContext ctx = torus1(32);
  const SpaceTimeField u(ctx.chart(), {0.0, 0.5, 1.0}, std::vector<std::vector<double>>(3, std::vector<double>(32, 1.5)));
  Cylinder cyl{{M_PI, 0, 0}, 1.0, 2.0, 1.0};
  const EstimateContext e = make_estimate_context(ctx, u, NonlinearitySpec::zero(), 1.2, -2.0, cyl, 0.0, 0.0, false);
  const EstimateReport r = verify_estimate(e, hsz_rhs(Theorem::BetaStatic, e), CMode::calibrated());
  EXPECT_EQ(r.c, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(Estimate, CalibrateThenFixedRoundTrip) {
  const GeometryContext ctx = torus1(64);
  const SpaceTimeField u = heat_like(ctx, 1.2);
  const double beta = beta_admissible_range(1.2, 2.0).midpoint;
  Cylinder cyl{{M_PI, 0, 0}, 1.0, 2.0, 1.0};
  for (Theorem th : {Theorem::BetaStatic, Theorem::BetaLocal, Theorem::BetaGlobal}) {
    const EstimateContext e =
        make_estimate_context(ctx, u, NonlinearitySpec::zero(), 1.2, beta, cyl, 0.0, 0.0, is_global(th));
    const EstimateReport rep = hsz_rhs(th, e);
    const EstimateReport cal = verify_estimate(e, rep, CMode::calibrated());
    ASSERT_TRUE(std::isfinite(cal.c));
    EXPECT_GT(cal.c, 0.0);
    EXPECT_EQ(cal.argsup.ratio, cal.sup_ratio);
    const EstimateReport fixed = verify_estimate(e, rep, CMode::fixed(cal.c));
    EXPECT_TRUE(fixed.pass);
    EXPECT_LE(fixed.sup_ratio, cal.c * (1.0 + 1e-12));
    EXPECT_FALSE(verify_estimate(e, rep, CMode::fixed(0.5 * cal.c)).pass);
    for (const SliceRhs& s : rep.slices) {
      EXPECT_GT(s.t, cyl.t0 - cyl.T);
      EXPECT_NEAR(s.total, rhs_total(s.terms), 1e-14 * s.total);
    }
  }
}

TEST(Estimate, LocalSamplesStayInHalfBall) {
  const GeometryContext ctx = torus1(64);
  const SpaceTimeField u = heat_like(ctx, 1.2);
  Cylinder cyl{{M_PI, 0, 0}, 1.0, 2.0, 1.0};
  const EstimateContext e = make_estimate_context(ctx, u, NonlinearitySpec::zero(), 1.2, -2.0, cyl, 0.0, 0.0, false);
  const EstimateReport rep = hsz_rhs(Theorem::BetaLocal, e);
  for (const EstimateSample& s : rep.samples) EXPECT_LE(std::abs(s.x[0] - M_PI), 1.0 + 1e-12);
  EXPECT_THROW(make_estimate_context(ctx, u, NonlinearitySpec::zero(), 1.2, -2.0, Cylinder{{M_PI, 0, 0}, 5.0, 2.0, 1.0},
                                     0.0, 0.0, false),
               Error);
}

TEST(Corollary, DecayBoundAtStartAndAlong) {
  const GeometryContext ctx = torus1(64);
  const SpaceTimeField u = heat_like(ctx, 1.5);
  CorollaryParams params;
  params.p = 1.5;
  const CorollaryReport r = corollary_bound_check(ClosedBound::Decay, ctx, u, NonlinearitySpec::zero(), params);
  ASSERT_FALSE(r.min_slack_per_time.empty());
  EXPECT_GE(r.min_slack_per_time.front(), 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_GE(r.min_scaled_slack, -1e-6);
}

TEST(Corollary, ConstantSolutionSlackIsVPowerDrop) {
  const GeometryContext ctx = torus1(16);
  SolverConfig c;
  c.p = 1.5;
  c.t_end = 1.0;
  c.outputs = 4;
  const SpaceTimeField u = solve(ctx, ScalarField(ctx.chart(), 0.0, 2.0), NonlinearitySpec::zero(), c).u;
  CorollaryParams params;
  params.p = 1.5;
  const CorollaryReport r = corollary_bound_check(ClosedBound::Decay, ctx, u, NonlinearitySpec::zero(), params);
  for (const ScalarField& s : r.slack)
    for (std::size_t q = 0; q < s.size(); ++q) EXPECT_NEAR(s[q], 0.0, 1e-10);
}

TEST(Corollary, RejectsExponentAboveBound) {
  const GeometryContext ctx = torus1(16);
  const SpaceTimeField u = heat_like(ctx, 2.5, 0.2);
  CorollaryParams params;
  params.p = 2.5;
  EXPECT_THROW(corollary_bound_check(ClosedBound::Decay, ctx, u, NonlinearitySpec::zero(), params), Error);
}
