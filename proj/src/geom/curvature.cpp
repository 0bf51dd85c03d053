#include "pmelab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "pmelab/error.hpp"

namespace pmelab {

namespace {

void check_point(const GeometryContext& ctx, const Vec3& x) {
  if (!ctx.chart().contains(x)) throw Error(ErrorCode::OutOfChart, "point outside chart extents");
}

Mat3 checked_inverse(int n, const Mat3& g) {
  Mat3 l;
  if (!cholesky(n, g, l)) throw Error(ErrorCode::SingularMetric, "metric eigenvalue <= 0");
  return inverse(n, g);
}

Christoffel christoffel_from(int n, const Mat3& ginv, const MetricGrad& dg) {
  Christoffel gam;
  for (int k = 0; k < 3; ++k) gam[k] = zero_matrix();
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gam[k][i][j] = gam[k][j][i] = 0.5 * s;
      }
  return gam;
}

double check_m(const GeometryContext& ctx, double m) {
  const int n = ctx.n();
  if (!(m >= n)) throw Error(ErrorCode::DegenerateDimension, "m must satisfy m >= n");
  if (m == n && !ctx.potential_constant())
    throw Error(ErrorCode::DegenerateDimension, "m = n with a nonconstant potential");
  return m;
}

Mat3 bakry_emery_from(int n, const Mat3& ric, const Mat3& hess_f, const Vec3& df, double m, bool drop_last) {
  Mat3 out = add(n, ric, hess_f);
  if (!drop_last) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[i][j] -= df[i] * df[j] / (m - n);
  }
  return out;
}

}  // namespace

PointCurvature point_curvature(const GeometryContext& ctx, const Vec3& x, double t) {
  check_point(ctx, x);
  const int n = ctx.n();
  const MetricField& metric = ctx.metric();
  PointCurvature pc;
  pc.g = metric.g(x, t);
  pc.ginv = checked_inverse(n, pc.g);
  pc.dtg = metric.dt(x, t);
  const MetricGrad dg = metric.dg(x, t);
  const MetricHess d2g = metric.d2g(x, t);
  pc.gamma = christoffel_from(n, pc.ginv, dg);

  // d_m Gamma^k_ij
  std::array<Christoffel, 3> dgam{};
  for (int mi = 0; mi < n; ++mi) {
    Mat3 dginv = scaled(n, mat_mul(n, mat_mul(n, pc.ginv, dg[mi]), pc.ginv), -1.0);
    for (int k = 0; k < 3; ++k) dgam[mi][k] = zero_matrix();
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += dginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
            s += pc.ginv[k][l] * (d2g[mi][i][j][l] + d2g[mi][j][i][l] - d2g[mi][l][i][j]);
          }
          dgam[mi][k][i][j] = dgam[mi][k][j][i] = 0.5 * s;
        }
  }

  Mat3 ric = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += dgam[k][k][i][j] - dgam[i][k][k][j];
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          s += pc.gamma[k][i][j] * pc.gamma[l][l][k] - pc.gamma[l][i][k] * pc.gamma[k][l][j];
      ric[i][j] = s;
    }
  pc.ric = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) pc.ric[i][j] = 0.5 * (ric[i][j] + ric[j][i]);

  const ScalarFunction& f = ctx.potential();
  pc.f = f(x, t);
  pc.df = f.gradient(n, x, t);
  const Mat3 d2f = f.hessian(n, x, t);
  pc.hess_f = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = d2f[i][j];
      for (int k = 0; k < n; ++k) s -= pc.gamma[k][i][j] * pc.df[k];
      pc.hess_f[i][j] = pc.hess_f[j][i] = s;
    }
  pc.ric_f = bakry_emery_from(n, pc.ric, pc.hess_f, pc.df, kInfiniteM, true);
  const double m = check_m(ctx, ctx.m());
  pc.ric_fm = bakry_emery_from(n, pc.ric, pc.hess_f, pc.df, m, ctx.m_infinite() || m == n);
  return pc;
}

Christoffel christoffel(const GeometryContext& ctx, const Vec3& x, double t) {
  check_point(ctx, x);
  const int n = ctx.n();
  const Mat3 ginv = checked_inverse(n, ctx.metric().g(x, t));
  return christoffel_from(n, ginv, ctx.metric().dg(x, t));
}

Mat3 ricci(const GeometryContext& ctx, const Vec3& x, double t) { return point_curvature(ctx, x, t).ric; }

Mat3 hessian_of_potential(const GeometryContext& ctx, const Vec3& x, double t) {
  return point_curvature(ctx, x, t).hess_f;
}

Mat3 bakry_emery_ricci(const GeometryContext& ctx, const Vec3& x, double t) {
  return point_curvature(ctx, x, t).ric_fm;
}

Mat3 bakry_emery_ricci(const GeometryContext& ctx, const Vec3& x, double t, double m) {
  check_m(ctx, m);
  const PointCurvature pc = point_curvature(ctx, x, t);
  return bakry_emery_from(ctx.n(), pc.ric, pc.hess_f, pc.df, m, m == kInfiniteM || m == ctx.n());
}

LaplacianCoeffs f_laplacian_coeffs(const GeometryContext& ctx, const Vec3& x, double t) {
  check_point(ctx, x);
  const int n = ctx.n();
  LaplacianCoeffs c;
  c.a = checked_inverse(n, ctx.metric().g(x, t));
  const Christoffel gam = christoffel_from(n, c.a, ctx.metric().dg(x, t));
  const Vec3 df = ctx.potential().gradient(n, x, t);
  c.b = Vec3{0.0, 0.0, 0.0};
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) s -= c.a[i][k] * gam[j][i][k];
      s -= c.a[i][j] * df[i];
    }
    c.b[j] = s;
  }
  return c;
}

SpaceTimeBox chart_region(const Chart& chart, double t_lo, double t_hi, int samples_per_axis, int time_samples) {
  SpaceTimeBox box;
  for (int i = 0; i < chart.dim(); ++i) {
    const Axis& ax = chart.axis(i);
    const double h = ax.spacing();
    if (ax.topology == Topology::Periodic) {
      box.lo[i] = ax.lo;
      box.hi[i] = ax.hi - h;
    } else {
      box.lo[i] = ax.lo + Chart::kEdgeLayers * h;
      box.hi[i] = ax.hi - Chart::kEdgeLayers * h;
    }
  }
  box.samples_per_axis = samples_per_axis;
  box.t_lo = t_lo;
  box.t_hi = t_hi;
  box.time_samples = time_samples;
  return box;
}

CurvatureReport certify_lower_bounds(const GeometryContext& ctx, const SpaceTimeBox& region) {
  const int n = ctx.n();
  if (region.samples_per_axis < 1 || region.time_samples < 1)
    throw Error(ErrorCode::InvalidArgument, "region needs at least one sample per axis");
  CurvatureReport rep;
  rep.n = n;
  rep.m = ctx.m();
  rep.region = region;
  rep.lambda_min = std::numeric_limits<double>::infinity();
  rep.lambda_dt_min = std::numeric_limits<double>::infinity();
  const int s = region.samples_per_axis;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(s);
  for (int it = 0; it < region.time_samples; ++it) {
    const double t = region.time_samples == 1
                         ? region.t_lo
                         : region.t_lo + (region.t_hi - region.t_lo) * it / (region.time_samples - 1);
    for (std::size_t q = 0; q < total; ++q) {
      Vec3 x{0.0, 0.0, 0.0};
      std::size_t r = q;
      for (int i = n - 1; i >= 0; --i) {
        const int k = static_cast<int>(r % s);
        r /= s;
        x[i] = s == 1 ? region.lo[i] : region.lo[i] + (region.hi[i] - region.lo[i]) * k / (s - 1);
      }
      const PointCurvature pc = point_curvature(ctx, x, t);
      CurvatureSample cs;
      cs.x = x;
      cs.t = t;
      cs.ric = pc.ric;
      cs.hess_f = pc.hess_f;
      cs.ric_fm = pc.ric_fm;
      cs.lambda_min = min_generalized_eigenvalue(n, pc.ric_fm, pc.g);
      cs.lambda_dt_min = min_generalized_eigenvalue(n, pc.dtg, pc.g);
      rep.lambda_min = std::min(rep.lambda_min, cs.lambda_min);
      rep.lambda_dt_min = std::min(rep.lambda_dt_min, cs.lambda_dt_min);
      rep.samples.push_back(cs);
    }
  }
  const double neg = std::max(0.0, -rep.lambda_min);
  if (ctx.m_infinite()) {
    rep.k = neg;
  } else if (ctx.m() - 1.0 <= 0.0) {
    rep.k = neg > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    rep.k = neg / (ctx.m() - 1.0);
  }
  rep.h = std::max(0.0, -0.5 * rep.lambda_dt_min);
  return rep;
}

void write_curvature_csv(const CurvatureReport& report, std::ostream& os) {
  os.precision(17);
  for (int i = 0; i < report.n; ++i) os << "x" << (i + 1) << ",";
  os << "t,lambda_min,k_local,h_local\n";
  for (const auto& s : report.samples) {
    for (int i = 0; i < report.n; ++i) os << s.x[i] << ",";
    double k_local = std::max(0.0, -s.lambda_min);
    if (report.m != kInfiniteM && report.m > 1.0) k_local /= (report.m - 1.0);
    os << s.t << "," << s.lambda_min << "," << k_local << "," << std::max(0.0, -0.5 * s.lambda_dt_min) << "\n";
  }
}

}  // namespace pmelab
