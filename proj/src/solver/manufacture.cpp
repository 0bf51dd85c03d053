#include "pmelab/manufacture.hpp"

#include <cmath>

#include "pmelab/curvature.hpp"
#include "pmelab/error.hpp"

namespace pmelab {

namespace {

double phase_of(const PressureExpr::Mode& m, const Vec3& x) {
  return m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2] + m.phase;
}

}  // namespace

double PressureExpr::value(const Vec3& x, double t) const {
  double s = c0;
  for (const Mode& m : modes) s += m.a * std::sin(phase_of(m, x));
  return amp * std::exp(rate * t) * s;
}

double PressureExpr::dt(const Vec3& x, double t) const { return rate * value(x, t); }

Vec3 PressureExpr::grad(const Vec3& x, double t) const {
  Vec3 g{0.0, 0.0, 0.0};
  const double e = amp * std::exp(rate * t);
  for (const Mode& m : modes) {
    const double c = m.a * std::cos(phase_of(m, x));
    for (int i = 0; i < 3; ++i) g[i] += e * c * m.k[i];
  }
  return g;
}

Mat3 PressureExpr::hess(const Vec3& x, double t) const {
  Mat3 h = zero_matrix();
  const double e = amp * std::exp(rate * t);
  for (const Mode& m : modes) {
    const double s = m.a * std::sin(phase_of(m, x));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) h[i][j] -= e * s * m.k[i] * m.k[j];
  }
  return h;
}

double PressureExpr::lower_bound(double t) const {
  double s = c0;
  for (const Mode& m : modes) s -= std::abs(m.a);
  return amp * std::exp(rate * t) * s;
}

bool PressureExpr::spatially_constant() const {
  for (const Mode& m : modes)
    if (m.a != 0.0) return false;
  return true;
}

PressureExpr pressure_catalog(const std::string& tag) {
  PressureExpr e;
  e.tag = tag;
  if (tag == "constant") {
    e.c0 = 2.0;
  } else if (tag == "exp-growth") {
    e.c0 = 2.0;
    e.rate = 0.5;
  } else if (tag == "decaying-sine") {
    e.c0 = 2.0;
    e.rate = -1.0;
    e.modes = {{1.0, {1.0, 0.0, 0.0}, 0.0}};
  } else if (tag == "static-sine") {
    e.c0 = 2.0;
    e.modes = {{0.5, {1.0, 0.0, 0.0}, 0.0}};
  } else if (tag == "unit-sine") {
    e.c0 = 2.0;
    e.modes = {{1.0, {1.0, 0.0, 0.0}, 0.0}};
  } else if (tag == "cosine-static") {
    e.c0 = 2.0;
    e.modes = {{1.0, {1.0, 0.0, 0.0}, M_PI / 2.0}};
  } else if (tag == "sine-2d") {
    e.c0 = 3.0;
    e.rate = -0.5;
    e.modes = {{0.6, {1.0, 0.0, 0.0}, 0.0}, {0.4, {0.0, 1.0, 0.0}, 0.3}, {0.3, {1.0, 1.0, 0.0}, 0.0}};
  } else {
    throw Error(ErrorCode::UnknownCase, "unknown pressure catalog tag '" + tag + "'");
  }
  return e;
}

std::vector<std::string> pressure_catalog_tags() {
  return {"constant", "exp-growth", "decaying-sine", "static-sine", "unit-sine", "cosine-static", "sine-2d"};
}

double manufactured_sigma(const GeometryContext& ctx, const PressureExpr& expr, double p, const Vec3& x, double t) {
  const int n = ctx.n();
  const LaplacianCoeffs lc = f_laplacian_coeffs(ctx, x, t);
  const double v = expr.value(x, t);
  const Vec3 dv = expr.grad(x, t);
  const Mat3 d2v = expr.hess(x, t);
  double lap = 0.0, grad2 = 0.0;
  for (int i = 0; i < n; ++i) {
    lap += lc.b[i] * dv[i];
    for (int j = 0; j < n; ++j) {
      lap += lc.a[i][j] * d2v[i][j];
      grad2 += lc.a[i][j] * dv[i] * dv[j];
    }
  }
  return expr.dt(x, t) - (p - 1.0) * v * lap - grad2;
}

Manufactured manufacture(const GeometryContext& ctx, const PressureExpr& expr, double p, double t) {
  return manufacture(ctx, GridGeometry::build(ctx, t), expr, p, t);
}

Manufactured manufacture(const GeometryContext& ctx, const GridGeometry& geo, const PressureExpr& expr, double p,
                         double t) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  const Chart& chart = ctx.chart();
  Manufactured out;
  out.v = ScalarField::sample(chart, t, [&](const Vec3& x) { return expr.value(x, t); });
  for (std::size_t q = 0; q < out.v.size(); ++q)
    if (!(out.v[q] > 0.0)) throw Error(ErrorCode::NonPositiveV, "catalog pressure '" + expr.tag + "' is not positive");
  out.u = map_field(out.v, [p](double v) { return std::pow((p - 1.0) * v / p, 1.0 / (p - 1.0)); });
  out.v_t = ScalarField::sample(chart, t, [&](const Vec3& x) { return expr.dt(x, t); });
  out.sigma = ScalarField::sample(chart, t, [&](const Vec3& x) { return manufactured_sigma(ctx, expr, p, x, t); });
  const ScalarField lap = f_laplacian(geo, out.v);
  const GradientField gv = gradient(geo, out.v);
  std::vector<double> sg(out.v.size());
  for (std::size_t q = 0; q < sg.size(); ++q)
    sg[q] = out.v_t[q] - (p - 1.0) * out.v[q] * lap[q] - gv.norm2[q];
  out.sigma_grid = ScalarField(chart, t, std::move(sg));
  out.sigma_x = gradient(geo, out.sigma).covector;
  out.sigma_v = 0.0;
  return out;
}

}  // namespace pmelab
