#include "pmelab/operators.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/stencil.hpp"

namespace pmelab {

GridGeometry GridGeometry::build(const GeometryContext& ctx, double t) {
  GridGeometry geo;
  geo.chart = ctx.chart();
  geo.n = ctx.n();
  geo.t = t;
  geo.m = ctx.m();
  const std::size_t sz = geo.chart.size();
  geo.g.resize(sz);
  geo.ginv.resize(sz);
  geo.dtg.resize(sz);
  geo.gamma.resize(sz);
  geo.drift.resize(sz);
  geo.df.resize(sz);
  geo.ric_f.resize(sz);
  geo.ric_fm.resize(sz);
  geo.f.resize(sz);
  geo.density.resize(sz);
  const int n = geo.n;
  for (std::size_t p = 0; p < sz; ++p) {
    const PointCurvature pc = point_curvature(ctx, geo.chart.point(p), t);
    geo.g[p] = pc.g;
    geo.ginv[p] = pc.ginv;
    geo.dtg[p] = pc.dtg;
    geo.gamma[p] = pc.gamma;
    geo.df[p] = pc.df;
    geo.ric_f[p] = pc.ric_f;
    geo.ric_fm[p] = pc.ric_fm;
    geo.f[p] = pc.f;
    geo.density[p] = std::exp(-pc.f) * std::sqrt(determinant(n, pc.g));
    Vec3 b{0.0, 0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) s -= pc.ginv[i][k] * pc.gamma[j][i][k];
        s -= pc.ginv[i][j] * pc.df[i];
      }
      b[j] = s;
    }
    geo.drift[p] = b;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && pc.g[i][j] != 0.0) geo.diagonal = false;
  }
  return geo;
}

void GridGeometry::set_m(const GeometryContext& ctx, double new_m) {
  if (!(new_m >= n)) throw Error(ErrorCode::DegenerateDimension, "m must satisfy m >= n");
  if (new_m == n && !ctx.potential_constant())
    throw Error(ErrorCode::DegenerateDimension, "m = n with a nonconstant potential");
  m = new_m;
  const bool drop = (new_m == kInfiniteM || new_m == n);
  for (std::size_t p = 0; p < ric_f.size(); ++p) {
    Mat3 r = ric_f[p];
    if (!drop)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i][j] -= df[p][i] * df[p][j] / (new_m - n);
    ric_fm[p] = r;
  }
}

std::vector<double> partial(const Chart& chart, const std::vector<double>& w, int axis) {
  const Axis& ax = chart.axis(axis);
  const auto stride = static_cast<std::ptrdiff_t>(chart.stride(axis));
  const bool periodic = ax.topology == Topology::Periodic;
  const double h = ax.spacing();
  std::vector<double> out(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    const int i = static_cast<int>((p / chart.stride(axis)) % static_cast<std::size_t>(ax.resolution));
    const double* line = w.data() + static_cast<std::ptrdiff_t>(p) - i * stride;
    out[p] = stencil_d1(line, stride, i, ax.resolution, h, periodic);
  }
  return out;
}

std::vector<double> second_partial(const Chart& chart, const std::vector<double>& w, int axis) {
  const Axis& ax = chart.axis(axis);
  const auto stride = static_cast<std::ptrdiff_t>(chart.stride(axis));
  const bool periodic = ax.topology == Topology::Periodic;
  const double h = ax.spacing();
  std::vector<double> out(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    const int i = static_cast<int>((p / chart.stride(axis)) % static_cast<std::size_t>(ax.resolution));
    const double* line = w.data() + static_cast<std::ptrdiff_t>(p) - i * stride;
    out[p] = stencil_d2(line, stride, i, ax.resolution, h, periodic);
  }
  return out;
}

namespace {

void require_chart(const GridGeometry& geo, const ScalarField& w) {
  if (geo.chart != w.chart()) throw Error(ErrorCode::ShapeMismatch, "field chart differs from geometry chart");
}

ScalarField finite_or_throw(ScalarField f, const char* what) {
  f.require_finite(what);
  return f;
}

/// All first and second coordinate partials of w.
struct Partials {
  std::array<std::vector<double>, 3> d1;
  std::array<std::array<std::vector<double>, 3>, 3> d2;
};

Partials all_partials(const Chart& chart, const std::vector<double>& w, bool second) {
  Partials out;
  const int n = chart.dim();
  for (int i = 0; i < n; ++i) out.d1[i] = partial(chart, w, i);
  if (second) {
    for (int i = 0; i < n; ++i) {
      out.d2[i][i] = second_partial(chart, w, i);
      for (int j = i + 1; j < n; ++j) {
        out.d2[i][j] = partial(chart, out.d1[i], j);
        out.d2[j][i] = out.d2[i][j];
      }
    }
  }
  return out;
}

}  // namespace

GradientField gradient(const GridGeometry& geo, const ScalarField& w) {
  require_chart(geo, w);
  const int n = geo.n;
  const Partials d = all_partials(geo.chart, w.values(), false);
  GradientField out;
  const std::size_t sz = w.size();
  out.covector.resize(sz);
  out.vector.resize(sz);
  std::vector<double> norm(sz);
  for (std::size_t p = 0; p < sz; ++p) {
    Vec3 c{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) c[i] = d.d1[i][p];
    out.covector[p] = c;
    out.vector[p] = mat_vec(n, geo.ginv[p], c);
    norm[p] = std::max(0.0, dot(n, c, out.vector[p]));
  }
  out.norm2 = finite_or_throw(ScalarField(geo.chart, w.time(), std::move(norm)), "|grad w|^2");
  return out;
}

GradientField gradient(const GeometryContext& ctx, const ScalarField& w) {
  return gradient(GridGeometry::build(ctx, w.time()), w);
}

ScalarField f_laplacian(const GridGeometry& geo, const ScalarField& w) {
  require_chart(geo, w);
  const int n = geo.n;
  const Partials d = all_partials(geo.chart, w.values(), true);
  std::vector<double> out(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      s += geo.drift[p][i] * d.d1[i][p];
      for (int j = 0; j < n; ++j) s += geo.ginv[p][i][j] * d.d2[i][j][p];
    }
    out[p] = s;
  }
  return finite_or_throw(ScalarField(geo.chart, w.time(), std::move(out)), "Delta_f w");
}

ScalarField f_laplacian(const GeometryContext& ctx, const ScalarField& w) {
  return f_laplacian(GridGeometry::build(ctx, w.time()), w);
}

HessianField hessian(const GridGeometry& geo, const ScalarField& w) {
  require_chart(geo, w);
  const int n = geo.n;
  const Partials d = all_partials(geo.chart, w.values(), true);
  HessianField out;
  out.h.resize(w.size());
  std::vector<double> norm(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    Mat3 h = zero_matrix();
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = d.d2[i][j][p];
        for (int k = 0; k < n; ++k) s -= geo.gamma[p][k][i][j] * d.d1[k][p];
        h[i][j] = h[j][i] = s;
      }
    out.h[p] = h;
    const Mat3 a = mat_mul(n, geo.ginv[p], h);  // h^i_j
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += a[i][j] * a[j][i];
    norm[p] = std::max(0.0, s);
  }
  out.norm2 = finite_or_throw(ScalarField(geo.chart, w.time(), std::move(norm)), "|Hess w|^2");
  return out;
}

HessianField hessian(const GeometryContext& ctx, const ScalarField& w) {
  return hessian(GridGeometry::build(ctx, w.time()), w);
}

ScalarField inner(const GridGeometry& geo, const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  std::vector<double> out(a.size());
  for (std::size_t p = 0; p < a.size(); ++p) out[p] = bilinear(geo.n, geo.ginv[p], a[p], b[p]);
  return ScalarField(geo.chart, geo.t, std::move(out));
}

ScalarField pairing(const GridGeometry& geo, const std::vector<Mat3>& tensor, const std::vector<Vec3>& x) {
  std::vector<double> out(x.size());
  for (std::size_t p = 0; p < x.size(); ++p) out[p] = bilinear(geo.n, tensor[p], x[p], x[p]);
  return ScalarField(geo.chart, geo.t, std::move(out));
}

BochnerResult bochner_residual(const GridGeometry& geo, const ScalarField& w) {
  const GradientField gw = gradient(geo, w);
  const ScalarField lap_w = f_laplacian(geo, w);
  const ScalarField lap_grad2 = f_laplacian(geo, gw.norm2);
  const GradientField g_lap = gradient(geo, lap_w);
  const HessianField hw = hessian(geo, w);
  const ScalarField ric_f = pairing(geo, geo.ric_f, gw.vector);
  const ScalarField ric_fm = pairing(geo, geo.ric_fm, gw.vector);
  const bool m_inf = geo.m == kInfiniteM;
  BochnerResult out;
  std::vector<double> res(w.size()), slack(w.size()), scale(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) {
    const double lhs = 0.5 * lap_grad2[p] - dot(geo.n, gw.vector[p], g_lap.covector[p]);
    res[p] = lhs - hw.norm2[p] - ric_f[p];
    const double rhs = (m_inf ? 0.0 : lap_w[p] * lap_w[p] / geo.m) + ric_fm[p];
    slack[p] = lhs - rhs;
    scale[p] = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  }
  out.residual = finite_or_throw(ScalarField(geo.chart, w.time(), std::move(res)), "Bochner residual");
  out.slack = finite_or_throw(ScalarField(geo.chart, w.time(), std::move(slack)), "Bochner slack");
  out.scale = ScalarField(geo.chart, w.time(), std::move(scale));
  return out;
}

BochnerResult bochner_residual(const GeometryContext& ctx, const ScalarField& w) {
  return bochner_residual(GridGeometry::build(ctx, w.time()), w);
}

ScalarField cauchy_schwarz_slack(const GridGeometry& geo, const ScalarField& v) {
  const GradientField gv = gradient(geo, v);
  const HessianField hv = hessian(geo, v);
  const ScalarField lap = f_laplacian(geo, v);
  const bool m_inf = geo.m == kInfiniteM;
  std::vector<double> out(v.size());
  for (std::size_t p = 0; p < v.size(); ++p) {
    const double fv = dot(geo.n, geo.df[p], gv.vector[p]);
    double s = hv.norm2[p];
    if (!m_inf && geo.m > geo.n) s += fv * fv / (geo.m - geo.n);
    if (!m_inf) s -= lap[p] * lap[p] / geo.m;
    out[p] = s;
  }
  return ScalarField(geo.chart, v.time(), std::move(out));
}

std::vector<Mat3> ricci_on_grid(const GeometryContext& ctx, double t) {
  const Chart& chart = ctx.chart();
  std::vector<Mat3> samples(chart.size());
  for (std::size_t p = 0; p < chart.size(); ++p) samples[p] = ctx.metric().g(chart.point(p), t);
  const MetricField sampled = MetricField::sampled(chart, std::move(samples), ctx.metric().name() + "-sampled");
  const GeometryContext sctx(chart, sampled, ctx.potential(), ctx.m());
  std::vector<Mat3> out(chart.size());
  for (std::size_t p = 0; p < chart.size(); ++p) out[p] = point_curvature(sctx, chart.point(p), t).ric;
  return out;
}

}  // namespace pmelab
