#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "pmelab/convergence.hpp"
#include "pmelab/error.hpp"
#include "pmelab/field_io.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/operators.hpp"

using namespace pmelab;

namespace {

GeometryContext flat_box(int n, int res, ScalarFunction f = zero_function(), double m = kInfiniteM) {
  std::vector<double> lo(n, -1.0), hi(n, 1.0);
  return GeometryContext(box_chart(lo, hi, res, Topology::Bounded), MetricField::flat(n), f, m);
}

double interior_max_diff(const ScalarField& a, double value) {
  double worst = 0.0;
  for (std::size_t q : a.chart().interior_indices()) worst = std::max(worst, std::abs(a[q] - value));
  return worst;
}

}  // namespace

TEST(Gradient, LinearAndConstant) {
  const GeometryContext ctx = flat_box(2, 16);
  const GradientField g = gradient(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return x[0]; }));
  EXPECT_LT(interior_max_diff(g.norm2, 1.0), 1e-12);
  for (std::size_t q : ctx.chart().interior_indices()) {
    EXPECT_NEAR(g.vector[q][0], 1.0, 1e-12);
    EXPECT_NEAR(g.vector[q][1], 0.0, 1e-12);
  }
  const GradientField c = gradient(ctx, ScalarField(ctx.chart(), 0.0, 3.0));
  EXPECT_EQ(interior_max_diff(c.norm2, 0.0), 0.0);
}

TEST(Gradient, ScaledMetric) {
  const GeometryContext ctx(box_chart({-1}, {1}, 16, Topology::Bounded), MetricField::scaled_flat(1, 4.0),
                            zero_function(), 2.0);
  const GradientField g = gradient(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return x[0]; }));
  for (std::size_t q : ctx.chart().interior_indices()) {
    EXPECT_NEAR(g.vector[q][0], 0.25, 1e-12);
    EXPECT_NEAR(g.norm2[q], 0.25, 1e-12);
  }
}

TEST(Gradient, ShapeMismatch) {
  const GeometryContext ctx = flat_box(1, 16);
  EXPECT_THROW(gradient(ctx, ScalarField(box_chart({-1}, {1}, 32, Topology::Bounded), 0.0, 1.0)), Error);
}

TEST(FLaplacianOp, Oracles) {
  const GeometryContext ctx = flat_box(3, 12);
  const ScalarField r2 =
      ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; });
  EXPECT_LT(interior_max_diff(f_laplacian(ctx, r2), 6.0), 1e-10);
  const GeometryContext lin = flat_box(2, 16, linear_function({1, 0, 0}), 3.0);
  const ScalarField x1 = ScalarField::sample(lin.chart(), 0, [](const Vec3& x) { return x[0]; });
  EXPECT_LT(interior_max_diff(f_laplacian(lin, x1), -1.0), 1e-12);
}

TEST(FLaplacianOp, SineFourthOrder) {
  std::vector<double> err;
  for (int n : {32, 64, 128}) {
    const GeometryContext ctx(torus_chart(1, n), MetricField::flat(1), zero_function(), 2.0);
    const ScalarField w = ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::sin(x[0]); });
    const ScalarField l = f_laplacian(ctx, w);
    double e = 0.0;
    for (std::size_t q = 0; q < w.size(); ++q) e = std::max(e, std::abs(l[q] + w[q]));
    err.push_back(e);
  }
  for (double o : observed_orders(err)) EXPECT_GE(o, 3.5);
}

TEST(Hessian, Oracles) {
  const GeometryContext ctx = flat_box(2, 16);
  const HessianField h =
      hessian(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); }));
  const HessianField hx = hessian(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return x[0] * x[1]; }));
  for (std::size_t q : ctx.chart().interior_indices()) {
    EXPECT_NEAR(h.h[q][0][0], 1.0, 1e-10);
    EXPECT_NEAR(h.h[q][0][1], 0.0, 1e-10);
    EXPECT_NEAR(h.norm2[q], 2.0, 1e-9);
    EXPECT_NEAR(hx.h[q][0][1], 1.0, 1e-10);
    EXPECT_EQ(hx.h[q][0][1], hx.h[q][1][0]);
    EXPECT_NEAR(hx.norm2[q], 2.0, 1e-9);
  }
}

TEST(Hessian, SphereCosine) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "round-sphere";
  s.m = 3;
  std::vector<double> err;
  for (int n : {32, 64}) {
    const GeometryContext ctx = s.build(n);
    const ScalarField w = ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::cos(x[0]); });
    const HessianField h = hessian(ctx, w);
    const GridGeometry geo = GridGeometry::build(ctx, 0.0);
    double e = 0.0;
    for (std::size_t q : ctx.chart().interior_indices())
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(h.h[q][i][j] + w[q] * geo.g[q][i][j]));
    err.push_back(e);
  }
  EXPECT_LT(err[1], 1e-5);
  EXPECT_GE(observed_orders(err)[0], 3.5);
}

TEST(Bochner, QuadraticExact) {
  const GeometryContext ctx = flat_box(2, 16, zero_function(), 3.0);
  const BochnerResult b =
      bochner_residual(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); }));
  EXPECT_LT(interior_max_diff(b.residual, 0.0), 1e-8);
}

TEST(Bochner, LinearPotentialSlack) {
  // 1/2 Delta_f |grad w|^2 - <grad w, grad Delta_f w> = 0; (Delta_f w)^2/m = 1/2; Ric_f^m(grad w, grad w) = -1
  const GeometryContext ctx = flat_box(1, 32, linear_function({1, 0, 0}), 2.0);
  const BochnerResult b = bochner_residual(ctx, ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return x[0]; }));
  EXPECT_LT(interior_max_diff(b.slack, 0.5), 1e-10);
}

TEST(Bochner, SlackNonnegativeOnCatalog) {
  for (const std::string pot : {"zero", "sine", "sine-product"}) {
    GeometrySpec s;
    s.n = 2;
    s.metric = "conformal-space";
    s.metric_amp = 0.2;
    s.potential = pot;
    s.potential_amp = 0.4;
    s.m = 3.5;
    const GeometryContext ctx = s.build(48);
    const ScalarField w =
        ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::sin(x[0]) + 0.5 * std::cos(2 * x[1]); });
    const BochnerResult b = bochner_residual(ctx, w);
    for (std::size_t q : ctx.chart().interior_indices()) EXPECT_GE(b.slack[q], -1e-8 * b.scale[q]) << pot;
    const ScalarField cs = cauchy_schwarz_slack(GridGeometry::build(ctx, 0.0), w);
    for (std::size_t q : ctx.chart().interior_indices()) EXPECT_GE(cs[q], -1e-8 * b.scale[q]) << pot;
  }
}

TEST(Bochner, SlackNonnegativeQuadraticBox) {
  const GeometryContext ctx = flat_box(2, 48, quadratic_function(0.7), 2.5);
  const ScalarField w =
      ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::sin(2 * x[0]) * std::exp(x[1]); });
  const BochnerResult b = bochner_residual(ctx, w);
  for (std::size_t q : ctx.chart().interior_indices()) EXPECT_GE(b.slack[q], -1e-8 * b.scale[q]);
}

TEST(Bochner, DegenerateDimension) {
  try {
    const GeometryContext ctx(torus_chart(1, 16), MetricField::flat(1), sine_function(0.3, 0), 1.0);
    (void)bochner_residual(ctx, ScalarField(ctx.chart(), 0.0, 1.0));
    FAIL() << "m = n with a nonconstant potential was accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDimension);
  }
}

TEST(IntegrationByParts, PeriodicWeighted) {
  std::vector<double> err;
  for (int n : {16, 32, 64}) {
    GeometrySpec s;
    s.n = 2;
    s.metric = "conformal-space";
    s.metric_amp = 0.2;
    s.potential = "sine-product";
    s.potential_amp = 0.5;
    s.m = 4;
    const GeometryContext ctx = s.build(n);
    const GridGeometry geo = GridGeometry::build(ctx, 0.0);
    const ScalarField u = ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::cos(x[0] + x[1]); });
    const ScalarField v = ScalarField::sample(ctx.chart(), 0, [](const Vec3& x) { return std::sin(2 * x[0]) * std::cos(x[1]); });
    const ScalarField lv = f_laplacian(geo, v);
    const ScalarField duv = inner(geo, gradient(geo, u).covector, gradient(geo, v).covector);
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t q = 0; q < u.size(); ++q) {
      lhs += u[q] * lv[q] * geo.density[q];
      rhs -= duv[q] * geo.density[q];
    }
    err.push_back(std::abs(lhs - rhs) * ctx.chart().cell_volume());
  }
  EXPECT_LT(err.back(), 1e-6);
}

TEST(Convergence, Catalog) {
  EXPECT_GE(convergence_order("f_laplacian", "sin", {64, 128}).observed_order, 3.5);
  const DiffReport lin = convergence_order("gradient", "linear", {32, 64});
  EXPECT_TRUE(lin.exact);
  EXPECT_GE(convergence_order("bochner_residual", "sin", {32, 64, 128}).observed_order, 1.9);
  EXPECT_THROW(convergence_order("gradient", "no-such-case", {32, 64}), Error);
}

TEST(Convergence, GridCurvatureMatchesAnalytic) {
  GeometrySpec s;
  s.n = 2;
  s.metric = "conformal-space";
  s.metric_amp = 0.3;
  std::vector<double> err;
  for (int n : {32, 64}) {
    const GeometryContext ctx = s.build(n);
    const std::vector<Mat3> rg = ricci_on_grid(ctx, 0.0);
    double e = 0.0;
    for (std::size_t q : ctx.chart().interior_indices()) {
      const Mat3 ra = ricci(ctx, ctx.chart().point(q), 0.0);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e = std::max(e, std::abs(rg[q][i][j] - ra[i][j]));
    }
    err.push_back(e);
  }
  EXPECT_GE(observed_orders(err)[0], 3.5);
}

TEST(Fields, NonFiniteRejected) {
  ScalarField f(torus_chart(1, 16), 0.0, 1.0);
  f[3] = std::nan("");
  EXPECT_THROW(f.require_finite("test"), Error);
}

TEST(Fields, NonUniformTimesRejected) {
  const Chart c = torus_chart(1, 8);
  std::vector<std::vector<double>> frames(3, std::vector<double>(8, 1.0));
  EXPECT_THROW(SpaceTimeField(c, {0.0, 0.1, 0.3}, frames), Error);
}

TEST(FieldIo, BinaryRoundTrip) {
  const Chart c = torus_chart(2, 8);
  std::vector<std::vector<double>> frames;
  for (int k = 0; k < 3; ++k) {
    std::vector<double> f(c.size());
    for (std::size_t q = 0; q < f.size(); ++q) f[q] = 0.1 * k + q;
    frames.push_back(f);
  }
  const SpaceTimeField st(c, {0.0, 0.5, 1.0}, frames);
  std::stringstream ss;
  write_field_binary(st, ss);
  const BinaryDump d = read_field_binary(ss);
  EXPECT_EQ(d.dims, (std::vector<std::uint64_t>{8, 8}));
  EXPECT_EQ(d.times, st.times());
  EXPECT_EQ(d.frames, frames);
}

TEST(FieldIo, CsvHeader) {
  std::ostringstream os;
  write_field_csv(ScalarField(torus_chart(2, 8), 0.0, 1.0), os);
  const std::string s = os.str();
  EXPECT_EQ(s.substr(0, s.find('\n')), "x1,x2,value");
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 65);
}
