#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "pmelab/curvature.hpp"
#include "pmelab/distance.hpp"
#include "pmelab/error.hpp"
#include "pmelab/geometry_spec.hpp"

using namespace pmelab;

namespace {

GeometryContext line(ScalarFunction f, double m) { return GeometryContext(torus_chart(1, 32), MetricField::flat(1), f, m); }

GeometryContext sphere() {
  GeometrySpec s;
  s.n = 2;
  s.metric = "round-sphere";
  s.m = 3;
  return s.build(32);
}

void expect_matrix(const Mat3& a, const Mat3& b, int n, double tol) {
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) EXPECT_NEAR(a[i][j], b[i][j], tol) << "entry " << i << "," << j;
}

}  // namespace

TEST(Christoffel, FlatVanishes) {
  const GeometryContext ctx(torus_chart(3, 16), MetricField::flat(3), zero_function(), 4);
  const Christoffel c = christoffel(ctx, {0.3, 1.1, 2.0}, 0.7);
  for (int k = 0; k < 3; ++k) expect_matrix(c[k], zero_matrix(), 3, 0.0);
}

TEST(Christoffel, SpatiallyConstantConformalVanishes) {
  const GeometryContext ctx(torus_chart(2, 16), MetricField::conformal_time(2, 0.4), zero_function(), 3);
  const Christoffel c = christoffel(ctx, {0.3, 1.1, 0.0}, 1.3);
  for (int k = 0; k < 2; ++k) expect_matrix(c[k], zero_matrix(), 2, 1e-12);
}

TEST(Christoffel, SphereAgainstSymbolicForms) {
  const GeometryContext ctx = sphere();
  for (double th : {M_PI / 2, M_PI / 4, 1.0}) {
    const Christoffel c = christoffel(ctx, {th, 0.5, 0.0}, 0.0);
    EXPECT_NEAR(c[0][1][1], -std::sin(th) * std::cos(th), 1e-9);
    EXPECT_NEAR(c[1][0][1], std::cos(th) / std::sin(th), 1e-9);
    EXPECT_EQ(c[1][0][1], c[1][1][0]);
    EXPECT_NEAR(c[0][0][0], 0.0, 1e-12);
  }
  EXPECT_NEAR(christoffel(ctx, {M_PI / 4, 0.0, 0.0}, 0.0)[1][0][1], 1.0, 1e-9);
}

TEST(Christoffel, SymmetricInLowerIndices) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "conformal-space";
  s.metric_amp = 0.2;
  const GeometryContext ctx = s.build(16);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    const Christoffel c = christoffel(ctx, {u(rng), u(rng), 0.0}, 0.0);
    for (int k = 0; k < 2; ++k) EXPECT_EQ(max_abs_asymmetry(2, c[k]), 0.0);
  }
}

TEST(Ricci, SphereIsMetric) {
  const GeometryContext ctx = sphere();
  const double th = 0.9;
  expect_matrix(ricci(ctx, {th, 0.2, 0.0}, 0.0), Mat3{{{1, 0, 0}, {0, std::sin(th) * std::sin(th), 0}, {0, 0, 0}}}, 2,
                1e-7);
}

TEST(Ricci, HyperbolicIsMinusMetric) {
  GeometrySpec s;
  s.n = 2;
  s.chart = "box";
  s.lo = {-1.0, 0.5};
  s.hi = {1.0, 2.0};
  s.topology = "bounded";
  s.metric = "hyperbolic";
  s.m = 3;
  const GeometryContext ctx = s.build(16);
  const double y = 1.3;
  const Mat3 r = ricci(ctx, {0.1, y, 0.0}, 0.0);
  expect_matrix(r, Mat3{{{-1 / (y * y), 0, 0}, {0, -1 / (y * y), 0}, {0, 0, 0}}}, 2, 1e-7);
}

TEST(BakryEmery, FlatZeroPotential) {
  for (double m : {1.5, 2.0, 10.0, kInfiniteM})
    expect_matrix(bakry_emery_ricci(line(zero_function(), std::max(m, 1.0)), {1.0, 0, 0}, 0.0), zero_matrix(), 1, 0.0);
}

TEST(BakryEmery, QuadraticPotentialInfiniteM) {
  const GeometryContext ctx(torus_chart(2, 16), MetricField::flat(2), quadratic_function(1.0), kInfiniteM);
  expect_matrix(bakry_emery_ricci(ctx, {0.4, 0.9, 0}, 0.0), identity_matrix(2), 2, 1e-10);
}

TEST(BakryEmery, LinearPotentialFiniteM) {
  const GeometryContext ctx = line(linear_function({1.0, 0, 0}), 3.0);
  EXPECT_NEAR(bakry_emery_ricci(ctx, {0.5, 0, 0}, 0.0)[0][0], -0.5, 1e-12);
}

TEST(BakryEmery, MonotoneInM) {
  const GeometryContext ctx(torus_chart(2, 16), MetricField::flat(2), sine_product_function(0.7), 3.0);
  const Vec3 x{0.8, 2.1, 0};
  double prev = -1e300;
  for (double m : {2.1, 2.5, 3.0, 5.0, 20.0}) {
    const double lam = min_generalized_eigenvalue(2, bakry_emery_ricci(ctx, x, 0.0, m), identity_matrix(2));
    EXPECT_GE(lam, prev - 1e-14);
    prev = lam;
  }
}

TEST(BakryEmery, EqualDimensionNeedsConstantPotential) {
  GeometrySpec s;
  s.n = 1;
  s.potential = "sine";
  s.potential_amp = 0.3;
  s.m = 1;
  EXPECT_THROW(
      {
        const GeometryContext ctx = s.build(16);
        (void)bakry_emery_ricci(ctx, {0.5, 0, 0}, 0.0);
      },
      Error);
}

TEST(Certify, FlatStatic) {
  const GeometryContext ctx = line(zero_function(), 2.0);
  const CurvatureReport r = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 16, 3));
  EXPECT_EQ(r.k, 0.0);
  EXPECT_EQ(r.h, 0.0);
}

TEST(Certify, ShrinkingConformal) {
  const GeometryContext ctx(torus_chart(2, 16), MetricField::conformal_time(2, -1.0), zero_function(), 3);
  const CurvatureReport r = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 8, 3));
  EXPECT_NEAR(r.h, 1.0, 1e-12);
  EXPECT_EQ(r.k, 0.0);
}

TEST(Certify, LinearPotential) {
  const GeometryContext ctx = line(linear_function({1.0, 0, 0}), 3.0);
  const CurvatureReport r = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 8, 2));
  EXPECT_NEAR(r.k, 0.25, 1e-12);
}

TEST(Certify, SamplesRespectBounds) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "conformal-space";
  s.metric_amp = 0.3;
  s.potential = "sine-product";
  s.potential_amp = 0.5;
  s.m = 4;
  const GeometryContext ctx = s.build(16);
  const CurvatureReport r = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 12, 2));
  for (const CurvatureSample& smp : r.samples) {
    EXPECT_GE(smp.lambda_min + (r.m - 1) * r.k, -1e-12);
    EXPECT_GE(smp.lambda_dt_min + 2 * r.h, -1e-12);
  }
  std::ostringstream os;
  write_curvature_csv(r, os);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "x1,x2,t,lambda_min,k_local,h_local");
}

TEST(FLaplacian, Coefficients) {
  const LaplacianCoeffs flat = f_laplacian_coeffs(line(zero_function(), 2), {1, 0, 0}, 0);
  EXPECT_EQ(flat.a[0][0], 1.0);
  EXPECT_EQ(flat.b[0], 0.0);
  const GeometryContext ctx(torus_chart(2, 16), MetricField::flat(2), linear_function({1, 0, 0}), 3);
  const LaplacianCoeffs c = f_laplacian_coeffs(ctx, {1, 1, 0}, 0);
  EXPECT_NEAR(c.b[0], -1.0, 1e-12);
  EXPECT_NEAR(c.b[1], 0.0, 1e-12);
  const LaplacianCoeffs s = f_laplacian_coeffs(sphere(), {M_PI / 4, 0.3, 0}, 0);
  EXPECT_NEAR(s.b[0], 1.0, 1e-9);
  EXPECT_NEAR(s.a[1][1], 2.0, 1e-12);  // 1 / sin^2(pi/4)
}

TEST(Distance, FlatStatic) {
  GeometrySpec s;
  s.chart = "box";
  s.lo = {-5};
  s.hi = {5};
  s.topology = "bounded";
  const GeometryContext ctx = s.build(16);
  const auto [rho, drho] = model_distance_for(ctx, {0, 0, 0})({3, 0, 0}, 0.0);
  EXPECT_DOUBLE_EQ(rho, 3.0);
  EXPECT_DOUBLE_EQ(drho, 0.0);
}

TEST(Distance, ShrinkingConformalIsTight) {
  GeometrySpec s;
  s.chart = "box";
  s.lo = {-5};
  s.hi = {5};
  s.topology = "bounded";
  s.metric = "conformal-time";
  s.metric_rate = -0.5;
  const GeometryContext ctx = s.build(16);
  const auto [rho, drho] = model_distance_for(ctx, {0, 0, 0})({2, 0, 0}, 0.0);
  EXPECT_NEAR(rho, 2.0, 1e-14);
  EXPECT_NEAR(drho, -1.0, 1e-14);
  const CurvatureReport r = certify_lower_bounds(ctx, chart_region(ctx.chart(), 0, 1, 8, 2));
  EXPECT_NEAR(drho, -r.h * rho, 1e-12);
}

TEST(Distance, SphereAntipodal) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "round-sphere";
  s.theta_min = 0.0;
  ModelDistance d;
  d.model = DistanceModel::RoundSphere;
  d.n = 2;
  d.x0 = {0.5, 0.0, 0.0};
  const auto [rho, drho] = d({M_PI - 0.5, M_PI, 0.0}, 0.0);
  EXPECT_NEAR(rho, M_PI, 1e-12);
  EXPECT_EQ(drho, 0.0);
}

TEST(Distance, TriangleInequalityOnTorus) {
  const GeometryContext ctx(torus_chart(2, 16), MetricField::flat(2), zero_function(), 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2 * M_PI);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 a{u(rng), u(rng), 0}, b{u(rng), u(rng), 0}, c{u(rng), u(rng), 0};
    const double ab = model_distance_for(ctx, a)(b, 0).first;
    const double bc = model_distance_for(ctx, b)(c, 0).first;
    const double ac = model_distance_for(ctx, a)(c, 0).first;
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_NEAR(model_distance_for(ctx, a)(a, 0).first, 0.0, 1e-15);
  }
}

TEST(Distance, UnsupportedModel) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "conformal-space";
  EXPECT_THROW(model_distance_for(s.build(16), {0, 0, 0}), Error);
}

TEST(Metric, RejectsSingularAndOutOfChart) {
  const Mat3 bad{{{1, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
  EXPECT_THROW(inverse(2, bad), Error);
  const GeometryContext ctx = sphere();
  EXPECT_THROW(christoffel(ctx, {0.0, 0.0, 0.0}, 0.0), Error);
}

TEST(Linalg, GeneralizedEigenvalues) {
  const Mat3 g{{{2, 0, 0}, {0, 4, 0}, {0, 0, 1}}};
  const Mat3 a{{{2, 0, 0}, {0, 2, 0}, {0, 0, 3}}};
  const Vec3 ev = generalized_eigenvalues(3, a, g);
  EXPECT_NEAR(ev[0], 0.5, 1e-14);
  EXPECT_NEAR(ev[1], 1.0, 1e-14);
  EXPECT_NEAR(ev[2], 3.0, 1e-14);
}
