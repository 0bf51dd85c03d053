#include <gtest/gtest.h>

#include <array>
#include <chrono>
#include <cmath>
#include <random>

#include "pmelab/cutoff.hpp"
#include "pmelab/distance.hpp"
#include "pmelab/error.hpp"
#include "pmelab/estimates.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/history.hpp"
#include "pmelab/identities.hpp"
#include "pmelab/inequalities.hpp"
#include "pmelab/matrix_lemma.hpp"
#include "pmelab/max_point.hpp"
#include "pmelab/quadratics.hpp"
#include "pmelab/solver.hpp"

using namespace pmelab;

namespace {

GeometrySpec flat_torus(double m = 2.0) {
  GeometrySpec g;
  g.n = 1;
  g.m = m;
  return g;
}

GeometrySpec sine_torus() {
  GeometrySpec g = flat_torus();
  g.potential = "sine";
  g.potential_amp = 0.3;
  return g;
}

IdentityCase make_case(Lemma lemma, GeometrySpec g, double p) {
  IdentityCase c;
  c.lemma = lemma;
  c.geometry = g;
  c.p = p;
  return c;
}

// Minimiser of a quadratic in two variables from finite-difference gradient and Hessian at the origin.
std::array<double, 3> quadratic_argmin(const std::function<double(double, double)>& f) {
  const double h = 1.0;
  const double f0 = f(0, 0);
  const double gx = (f(h, 0) - f(-h, 0)) / (2 * h), gy = (f(0, h) - f(0, -h)) / (2 * h);
  const double hxx = (f(h, 0) - 2 * f0 + f(-h, 0)) / (h * h), hyy = (f(0, h) - 2 * f0 + f(0, -h)) / (h * h);
  const double hxy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
  const double det = hxx * hyy - hxy * hxy;
  const double x = -(hyy * gx - hxy * gy) / det, y = -(-hxy * gx + hxx * gy) / det;
  return {x, y, f(x, y)};
}

std::vector<PressureSlice> solver_slices(const GeometrySpec& g, double p, const NonlinearitySpec& spec) {
  const GeometryContext ctx = g.build(64);
  SolverConfig c;
  c.p = p;
  c.stepper = Stepper::RK4;
  c.t_end = 0.5;
  c.outputs = 4;
  const ScalarField u0 = ScalarField::sample(ctx.chart(), 0.0, [](const Vec3& x) { return 1.0 + 0.5 * std::sin(x[0]); });
  return solver_history(ctx, solve(ctx, u0, spec, c).u, spec, p);
}

}  // namespace

TEST(Identities, RefinementOrders) {
  std::vector<IdentityCase> cases;
  IdentityCase pe = make_case(Lemma::PressureEvolution, flat_torus(), 2.0);
  cases.push_back(pe);
  IdentityCase we = make_case(Lemma::WEvolution, flat_torus(), 2.0);
  we.pressure = "static-sine";
  we.beta = -1.0;
  cases.push_back(we);
  IdentityCase pr = make_case(Lemma::ProductRule, flat_torus(), 2.0);
  cases.push_back(pr);
  IdentityCase hf = make_case(Lemma::HFunctional, sine_torus(), 1.5);
  hf.s = 4.0;
  hf.q = -1.0;
  hf.eps = 1.5;
  hf.zeta = Zeta::exponential(4.0, 0.2, 0.1);
  hf.gamma = GammaAux::power(1.5);
  cases.push_back(hf);
  IdentityCase sw = make_case(Lemma::ShiftedW, sine_torus(), 1.5);
  sw.beta = -0.5;
  sw.eps = 0.5;
  cases.push_back(sw);
  for (const IdentityCase& c : cases) {
    const ResidualReport r = check_identity(c);
    EXPECT_TRUE(r.pass) << r.lemma;
    EXPECT_GE(r.observed_order, order_floor(c.lemma)) << r.lemma;
    ASSERT_EQ(r.residual_max.size(), 3u);
    EXPECT_LT(r.residual_max[2], r.residual_max[0]) << r.lemma;
  }
  EXPECT_EQ(order_floor(Lemma::PressureEvolution), 1.9);
  EXPECT_EQ(order_floor(Lemma::ProductRule), 1.9);
  EXPECT_EQ(order_floor(Lemma::WEvolution), 1.5);
}

TEST(Identities, ConstantPressureIsExact) {
  for (Lemma l : {Lemma::PressureEvolution, Lemma::WEvolution, Lemma::HFunctional, Lemma::ShiftedW}) {
    IdentityCase c = make_case(l, sine_torus(), 1.5);
    c.pressure = "constant";
    c.beta = -0.5;
    c.s = 2.0;
    const IdentityResidual r = identity_residual(c, 32);
    for (std::size_t q = 0; q < r.residual.size(); ++q) EXPECT_LE(std::abs(r.residual[q]), 1e-10 * r.scale[q]);
  }
}

TEST(Identities, ExponentialGrowthIsExact) {
  IdentityCase c = make_case(Lemma::PressureEvolution, flat_torus(), 2.0);
  c.pressure = "exp-growth";
  const ResidualReport r = check_identity(c);
  for (double e : r.residual_max) EXPECT_LE(e, 1e-10);
}

TEST(Identities, ProductRuleWithUnitFactor) {
  IdentityCase c = make_case(Lemma::ProductRule, flat_torus(), 2.0);
  c.pressure = "constant";
  const IdentityResidual a = identity_residual(c, 32);
  for (std::size_t q = 0; q < a.residual.size(); ++q) EXPECT_LE(std::abs(a.residual[q]), 1e-10 * a.scale[q]);
  c.pressure = "decaying-sine";
  c.second = "constant";
  const IdentityResidual b = identity_residual(c, 32);
  for (std::size_t q = 0; q < b.residual.size(); ++q) EXPECT_LE(std::abs(b.residual[q]), 1e-10 * b.scale[q]);
}

TEST(Identities, ZeroAmplitudePotentialMatchesNone) {
  IdentityCase a = make_case(Lemma::WEvolution, flat_torus(), 2.0);
  a.beta = -1.0;
  IdentityCase b = a;
  b.geometry.potential = "sine";
  b.geometry.potential_amp = 0.0;
  const IdentityResidual ra = identity_residual(a, 64), rb = identity_residual(b, 64);
  for (std::size_t q = 0; q < ra.residual.size(); ++q) EXPECT_EQ(ra.residual[q], rb.residual[q]);
}

TEST(Identities, HFunctionalAtSTwoMatchesShiftedW) {
  IdentityCase h = make_case(Lemma::HFunctional, sine_torus(), 1.5);
  h.s = 2.0;
  h.q = -0.7;
  h.eps = 0.4;
  IdentityCase w = make_case(Lemma::ShiftedW, sine_torus(), 1.5);
  w.beta = -0.7;
  w.eps = 0.4;
  const IdentityResidual rh = identity_residual(h, 64), rw = identity_residual(w, 64);
  for (std::size_t q = 0; q < rh.residual.size(); ++q)
    EXPECT_NEAR(rh.residual[q], rw.residual[q], 1e-10 * std::max(rh.scale[q], rw.scale[q]));
}

TEST(Identities, HFunctionalLinearGammaOnConstantV) {
  IdentityCase c = make_case(Lemma::HFunctional, flat_torus(), 1.5);
  c.pressure = "exp-growth";
  c.gamma = GammaAux::linear();
  c.s = 2.0;
  const IdentityResidual r = identity_residual(c, 32);
  for (std::size_t q = 0; q < r.residual.size(); ++q) EXPECT_LE(std::abs(r.residual[q]), 1e-10 * r.scale[q]);
}

TEST(Identities, RejectsOutOfRangeParameters) {
  IdentityCase c = make_case(Lemma::HFunctional, flat_torus(), 1.5);
  c.s = 1.5;
  EXPECT_THROW(c.validate(), Error);
  IdentityCase d = make_case(Lemma::WEvolution, sine_torus(), 1.5);
  d.geometry.m = 1.0;
  EXPECT_THROW(check_identity(d), Error);
  for (Lemma l : {Lemma::PressureEvolution, Lemma::WEvolution, Lemma::ProductRule, Lemma::HFunctional, Lemma::ShiftedW})
    EXPECT_EQ(parse_lemma(lemma_tag(l)), l);
}

TEST(Inequalities, SolverRunSlacks) {
  const GeometrySpec g = flat_torus();
  const GeometryContext ctx = g.build(64);
  {
    const auto slices = solver_slices(g, 1.2, NonlinearitySpec::zero());
    InequalityParams ip;
    ip.p = 1.2;
    ip.beta = beta_admissible_range(1.2, 2.0).midpoint;
    const ResidualReport r = check_inequality(InequalityKind::SuperflowW, ctx, slices, ip);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.scaled_slack_min, -1e-6);
  }
  {
    const auto slices = solver_slices(g, 1.3, NonlinearitySpec::zero());
    InequalityParams ip;
    ip.p = 1.3;
    const ResidualReport r = check_inequality(InequalityKind::OptimalW, ctx, slices, ip);
    EXPECT_TRUE(r.pass);
    EXPECT_GE(r.scaled_slack_min, -1e-6);
  }
}

TEST(Inequalities, KappaShiftsSlackByTwoKappaW) {
  const GeometrySpec g = flat_torus();
  const GeometryContext ctx = g.build(64);
  const auto slices = solver_slices(g, 1.2, NonlinearitySpec::zero());
  InequalityParams ip;
  ip.p = 1.2;
  ip.beta = -2.0;
  InequalityParams ip1 = ip;
  ip1.kappa = 1.0;
  for (const PressureSlice& s : slices) {
    const SlackField a = inequality_slack(InequalityKind::SuperflowW, ctx, s, ip);
    const SlackField b = inequality_slack(InequalityKind::SuperflowW, ctx, s, ip1);
    const ScalarField w = w_field(GridGeometry::build(ctx, s.t), s.v, ip.beta);
    for (std::size_t q = 0; q < w.size(); ++q) {
      EXPECT_NEAR(b.slack[q] - a.slack[q], 2.0 * w[q], 1e-10 * b.scale[q]);
      EXPECT_GE(b.slack[q] - a.slack[q], -1e-12);
    }
  }
}

TEST(Inequalities, ShiftedAtOptimumDominatesOptimal) {
  const GeometrySpec g = sine_torus();
  const GeometryContext ctx = g.build(64);
  const double p = 1.3;
  const auto slices = solver_slices(g, p, NonlinearitySpec::constant(0.2));
  InequalityParams ip;
  ip.p = p;
  ip.beta = -1.0 / (p - 1.0);
  ip.eps = p;
  ip.kappa = minimal_kappa(ctx, slices, p);
  for (const PressureSlice& s : slices) {
    const SlackField a = inequality_slack(InequalityKind::ShiftedW, ctx, s, ip);
    const SlackField b = inequality_slack(InequalityKind::OptimalW, ctx, s, ip);
    for (std::size_t q = 0; q < a.slack.size(); ++q) EXPECT_LE(a.slack[q] - b.slack[q], 1e-10 * a.scale[q]);
  }
}

TEST(Inequalities, ConstantDataZeroSlack) {
  const GeometrySpec g = flat_torus();
  const GeometryContext ctx = g.build(32);
  PressureSlice s;
  s.t = 0.0;
  s.v = ScalarField(ctx.chart(), 0.0, 2.0);
  s.v_t = ScalarField(ctx.chart(), 0.0, 0.0);
  s.sigma = ScalarField(ctx.chart(), 0.0, 0.0);
  s.sigma_v = ScalarField(ctx.chart(), 0.0, 0.0);
  s.sigma_x.assign(32, Vec3{0, 0, 0});
  InequalityParams ip;
  ip.p = 1.3;
  ip.beta = -1.0 / 0.3;
  ip.eps = 1.3;
  for (InequalityKind k : {InequalityKind::SuperflowW, InequalityKind::ShiftedW, InequalityKind::OptimalW}) {
    const SlackField f = inequality_slack(k, ctx, s, ip);
    for (std::size_t q = 0; q < f.slack.size(); ++q) EXPECT_NEAR(f.slack[q], 0.0, 1e-12) << inequality_tag(k);
  }
}

TEST(Inequalities, NegativeMarginIsAHypothesisViolation) {
  GeometrySpec g = sine_torus();
  g.potential_amp = 2.0;
  const GeometryContext ctx = g.build(64);
  const auto slices = solver_slices(g, 1.2, NonlinearitySpec::zero());
  InequalityParams ip;
  ip.p = 1.2;
  ip.beta = -2.0;
  try {
    check_inequality(InequalityKind::SuperflowW, ctx, slices, ip);
    FAIL() << "expected a hypothesis violation";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::HypothesisViolated);
  }
  ip.kappa = minimal_kappa(ctx, slices, 1.2);
  EXPECT_GT(ip.kappa, 0.0);
  EXPECT_NO_THROW(check_inequality(InequalityKind::SuperflowW, ctx, slices, ip));
}

TEST(Quadratics, Examples) {
  EXPECT_NEAR(gamma_optimum(1.5, 2.0).value, -0.75, 1e-14);
  EXPECT_NEAR(gamma_quadratic(-1.0, 0.0, 2.0, 3.0), 5.0, 1e-14);
  for (double m : {2.0, 3.0, 5.0, 10.0})
    EXPECT_NEAR(gamma_optimum(1.0 + 1.0 / std::sqrt(m - 1.0), m).value, 0.0, 1e-12);
  const QuadraticOptimum o = omega_optimum(2.0, 1.5, 2.0);
  EXPECT_NEAR(o.x, -2.0, 1e-14);
  EXPECT_NEAR(o.eps, 1.5, 1e-14);
  EXPECT_NEAR(o.value, -0.75, 1e-14);
  // at s = 2 the two quadratics coincide
  EXPECT_NEAR(omega_quadratic(-0.3, 0.7, 2.0, 1.4, 3.0), gamma_quadratic(-0.3, 0.7, 1.4, 3.0), 1e-12);
}

TEST(Quadratics, OptimaMatchIndependentMinimisation) {
  for (double p : {1.1, 1.3, 1.5, 2.0, 2.7})
    for (double m : {1.5, 2.0, 4.0}) {
      const QuadraticOptimum g = gamma_optimum(p, m);
      const auto ind = quadratic_argmin([&](double b, double e) { return gamma_quadratic(b, e, p, m); });
      EXPECT_NEAR(g.x, ind[0], 1e-9);
      EXPECT_NEAR(g.eps, ind[1], 1e-9);
      EXPECT_NEAR(g.value, ind[2], 1e-9);
      EXPECT_NEAR(g.value, gamma_quadratic(g.x, g.eps, p, m), 1e-12);
      const QuadraticOptimum lib = minimize_2d([&](double b, double e) { return gamma_quadratic(b, e, p, m); }, 0.0, 0.0);
      EXPECT_NEAR(lib.value, ind[2], 1e-9);
      for (double s : {2.0, 3.0, 4.5}) {
        const QuadraticOptimum w = omega_optimum(s, p, m);
        const auto iw = quadratic_argmin([&](double q, double e) { return omega_quadratic(q, e, s, p, m); });
        EXPECT_NEAR(w.x, iw[0], 1e-9);
        EXPECT_NEAR(w.eps, iw[1], 1e-9);
        EXPECT_NEAR(w.value, iw[2], 1e-9);
        EXPECT_NEAR(w.value, omega_quadratic(w.x, w.eps, s, p, m), 1e-12);
      }
    }
}

TEST(Quadratics, SignLattice) {
  int n = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int k = 0; k < 4; ++k, ++n) {
        const double p = 1.05 + 0.35 * i;
        const double m = 1.5 + 1.25 * j;
        const double s = 2.0 + 1.5 * k;
        EXPECT_EQ(gamma_optimum_negative(p, m), p < 1.0 + 1.0 / std::sqrt(m - 1.0));
        EXPECT_EQ(gamma_optimum_negative(p, m), gamma_optimum(p, m).value < 0.0);
        EXPECT_EQ(omega_optimum_nonpositive(s, p, m), p <= 1.0 + 1.0 / std::sqrt((s - 1.0) * (m - 1.0)));
        EXPECT_EQ(omega_optimum_nonpositive(s, p, m), omega_optimum(s, p, m).value <= 0.0);
      }
  EXPECT_EQ(n, 100);
  EXPECT_NEAR(second_family_p_limit(2.0), 2.0, 1e-15);
  EXPECT_NEAR(first_family_p_limit(2.0), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(closed_bound_p_limit(2.0, 2.0), 2.0, 1e-15);
}

TEST(MatrixLemma, Examples) {
  EXPECT_DOUBLE_EQ(matrix_lemma_closed_form(1.0, 0.0, 2), 1.0);
  EXPECT_DOUBLE_EQ(matrix_lemma_closed_form(0.0, 1.0, 3), 3.0);
  EXPECT_DOUBLE_EQ(matrix_lemma_closed_form(2.0, -1.0, 4), 4.0);
  const struct {
    double a, b;
    int n;
  } cases[] = {{1.0, 0.0, 2}, {1.0, 0.0, 3}, {0.0, 1.0, 3}, {2.0, -1.0, 4}, {-0.4, 0.9, 2}};
  for (const auto& c : cases) {
    const MatrixLemmaResult r = matrix_lemma_bruteforce(c.a, c.b, c.n, 1000, 200, 3, 1);
    EXPECT_LE(r.empirical, r.closed_form + 1e-9);
    EXPECT_GE(r.empirical, r.closed_form - 1e-6 * (1.0 + r.closed_form));
    EXPECT_EQ(r.trials, 1000);
  }
}

TEST(MatrixLemma, DeterministicAcrossThreadCounts) {
  const MatrixLemmaResult a = matrix_lemma_bruteforce(0.7, -0.3, 3, 1000, 50, 9, 1);
  const MatrixLemmaResult b = matrix_lemma_bruteforce(0.7, -0.3, 3, 1000, 50, 9, 4);
  EXPECT_EQ(a.empirical, b.empirical);
}

TEST(Cutoff, SmoothStep) {
  EXPECT_EQ(smooth_step(0.0).value, 0.0);
  EXPECT_EQ(smooth_step(1.0).value, 1.0);
  EXPECT_NEAR(smooth_step(0.5).value, 0.5, 1e-15);
  for (double s = 0.01; s < 1.0; s += 0.01) {
    const double h = 1e-6;
    EXPECT_NEAR(smooth_step(s).d1, (smooth_step(s + h).value - smooth_step(s - h).value) / (2 * h), 1e-5);
    EXPECT_GE(smooth_step(s).d1, 0.0);
  }
}

TEST(Cutoff, ProfileExamples) {
  const CutoffSpec c = build_cutoff({2.0, 1.0, 0.5, 1.0, 0.75}, 200);
  EXPECT_EQ(c.value(0.0, 1.0), 1.0);
  for (double t : {0.1, 0.5, 0.9, 1.0}) {
    EXPECT_EQ(c.value(2.0, t), 0.0);
    EXPECT_EQ(c.value(0.0, 0.0), 0.0);
    for (double rho = 0.0; rho <= 1.0; rho += 0.05) EXPECT_EQ(c.d_rho(rho, t), 0.0);
  }
  EXPECT_THROW(build_cutoff({2.0, 1.0, 0.0, 1.0, 0.75}), Error);
  EXPECT_THROW(build_cutoff({2.0, 1.0, 1.5, 1.0, 0.75}), Error);
  EXPECT_THROW(build_cutoff({2.0, 1.0, 0.5, 1.0, 1.0}), Error);
  try {
    build_cutoff({2.0, 1.0, -0.5, 1.0, 0.75});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadWindow);
  }
}

TEST(Cutoff, PropertiesOnLattice) {
  for (double R : {0.5, 2.0})
    for (double T : {0.5, 4.0})
      for (double frac : {0.1, 0.5, 1.0})
        for (double a : {0.5, 0.75, 0.9}) {
          const double t0 = 1.0;
          const CutoffSpec spec = build_cutoff({R, T, t0 - T + frac * T, t0, a}, 100);
          const CutoffCheck chk = check_cutoff(spec, 100);
          EXPECT_TRUE(chk.pass) << R << " " << T << " " << frac << " " << a;
          EXPECT_EQ(chk.properties.size(), 6u);
          EXPECT_TRUE(std::isfinite(chk.c) && std::isfinite(chk.c_a));
        }
}

TEST(Cutoff, MeasuredConstantsStable) {
  const CutoffParams p{2.0, 1.0, 0.5, 1.0, 0.75};
  const CutoffSpec coarse = build_cutoff(p, 32), fine = build_cutoff(p, 100);
  EXPECT_NEAR(coarse.c_a / fine.c_a, 1.0, 0.05);
  EXPECT_NEAR(coarse.c / fine.c, 1.0, 0.05);
}

TEST(MaxPoint, ZeroFieldIsTrivial) {
  const GeometryContext ctx = flat_torus().build(32);
  const SpaceTimeField w(ctx.chart(), {0.0, 0.5, 1.0}, std::vector<std::vector<double>>(3, std::vector<double>(32, 0.0)));
  const MaxPointReport r =
      replay_maximum_point(ctx, w, build_cutoff({2.0, 1.0, 0.5, 1.0, 0.75}, 50), model_distance_for(ctx, {M_PI, 0, 0}));
  EXPECT_EQ(r.branch, "trivial");
  EXPECT_EQ(r.value, 0.0);
}

TEST(MaxPoint, InteriorBump) {
  for (int n : {64, 128}) {
    const GeometryContext ctx = flat_torus().build(n);
    const double xc = ctx.chart().point(n / 2 - 3)[0];
    std::vector<double> times;
    std::vector<std::vector<double>> frames;
    for (int k = 0; k <= 4; ++k) {
      const double t = 0.25 * k;
      times.push_back(t);
      frames.push_back(ScalarField::sample(ctx.chart(), t, [t, xc](const Vec3& x) {
                         return (1.0 + t) * std::exp(-4.0 * (x[0] - xc) * (x[0] - xc));
                       }).values());
    }
    const SpaceTimeField w(ctx.chart(), times, frames);
    const MaxPointReport r = replay_maximum_point(ctx, w, build_cutoff({2.0, 1.0, 0.5, 1.0, 0.75}, 50),
                                                  model_distance_for(ctx, {M_PI, 0, 0}));
    EXPECT_EQ(r.branch, "interior");
    EXPECT_FALSE(r.at_start_time);
    EXPECT_GT(r.value, 0.0);
    EXPECT_NEAR(r.t, 1.0, 1e-12);
    const double dx = 2.0 * M_PI / n;
    EXPECT_NEAR(r.x[0], xc, 1e-12);
    EXPECT_LE(r.grad_norm, 10.0 * dx * dx);
    EXPECT_TRUE(r.first_order_ok);
    EXPECT_TRUE(r.second_order_ok);
    EXPECT_TRUE(r.time_order_ok);
  }
}
