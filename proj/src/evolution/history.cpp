#include "pmelab/history.hpp"

#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/pressure.hpp"

namespace pmelab {

PressureSlice manufactured_slice(const GeometryContext& ctx, const GridGeometry& geo, const PressureExpr& expr,
                                 double p, double t) {
  Manufactured m = manufacture(ctx, geo, expr, p, t);
  PressureSlice s;
  s.t = t;
  s.v = std::move(m.v);
  s.v_t = std::move(m.v_t);
  s.sigma = std::move(m.sigma);
  s.sigma_v = ScalarField(ctx.chart(), t, 0.0);
  s.sigma_x = std::move(m.sigma_x);
  return s;
}

PressureSlice solver_slice(const PmeOperator& op, const ScalarField& u, const NonlinearitySpec& spec, double p) {
  const double t = u.time();
  for (std::size_t q = 0; q < u.size(); ++q)
    if (!(u[q] > 0.0)) throw Error(ErrorCode::NonPositiveV, "density frame has a non-positive node");
  const ScalarField ut = op.rhs(u, t);
  PressureSlice s;
  s.t = t;
  s.v = pressure_transform(u, p);
  std::vector<double> vt(u.size());
  for (std::size_t q = 0; q < u.size(); ++q) vt[q] = p * std::pow(u[q], p - 2.0) * ut[q];
  s.v_t = ScalarField(u.chart(), t, std::move(vt));
  SigmaFields sf = sigma_fields(spec, p, s.v);
  s.sigma = std::move(sf.sigma);
  s.sigma_v = std::move(sf.sigma_v);
  s.sigma_x = std::move(sf.sigma_x);
  return s;
}

std::vector<PressureSlice> solver_history(const GeometryContext& ctx, const SpaceTimeField& u,
                                          const NonlinearitySpec& spec, double p, double floor) {
  PmeOperator op(ctx, spec, p, floor);
  std::vector<PressureSlice> out;
  out.reserve(u.frame_count());
  for (std::size_t k = 0; k < u.frame_count(); ++k) out.push_back(solver_slice(op, u.frame(k), spec, p));
  return out;
}

PressureDerivatives differentiate(const GridGeometry& geo, const PressureSlice& s, double p) {
  const int n = geo.n;
  const std::size_t sz = s.v.size();
  const bool has_df_term = std::isfinite(geo.m) && geo.m > n;
  PressureDerivatives d;
  d.gv = gradient(geo, s.v);
  d.hess = hessian(geo, s.v);
  d.lap_f = f_laplacian(geo, s.v);
  d.grad2 = d.gv.norm2;
  d.g2 = gradient(geo, d.grad2);
  d.dv_dg2 = inner(geo, d.gv.covector, d.g2.covector);
  d.dv_sigx = inner(geo, d.gv.covector, s.sigma_x);
  const GradientField gvt = gradient(geo, s.v_t);
  const ScalarField dvt = inner(geo, d.gv.covector, gvt.covector);
  const ScalarField dtg_vv = pairing(geo, geo.dtg, d.gv.vector);
  const ScalarField ric_vv = pairing(geo, geo.ric_fm, d.gv.vector);

  std::vector<double> dfdv(sz), dfdv2(sz), curv(sz), dtg2(sz);
  for (std::size_t q = 0; q < sz; ++q) {
    dfdv[q] = dot(n, geo.df[q], d.gv.vector[q]);
    dfdv2[q] = has_df_term ? dfdv[q] * dfdv[q] / (geo.m - n) : 0.0;
    curv[q] = 0.5 * dtg_vv[q] + (p - 1.0) * s.v[q] * ric_vv[q];
    dtg2[q] = 2.0 * dvt[q] - dtg_vv[q];
  }
  d.df_dv = ScalarField(geo.chart, s.t, std::move(dfdv));
  d.dfdv2_m = ScalarField(geo.chart, s.t, std::move(dfdv2));
  d.curv = ScalarField(geo.chart, s.t, std::move(curv));
  d.dt_grad2 = ScalarField(geo.chart, s.t, std::move(dtg2));
  return d;
}

}  // namespace pmelab
