#include "pmelab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelab/error.hpp"
#include "pmelab/superflow.hpp"

namespace pmelab {

std::string inequality_tag(InequalityKind kind) {
  switch (kind) {
    case InequalityKind::SuperflowW: return "superflow-w";
    case InequalityKind::ShiftedW: return "shifted-w";
    case InequalityKind::OptimalW: return "optimal-w";
    case InequalityKind::HBound: return "h-bound";
  }
  return "?";
}

InequalityKind parse_inequality(const std::string& tag) {
  for (InequalityKind k :
       {InequalityKind::SuperflowW, InequalityKind::ShiftedW, InequalityKind::OptimalW, InequalityKind::HBound})
    if (inequality_tag(k) == tag) return k;
  throw Error(ErrorCode::UnknownCase, "unknown inequality tag '" + tag + "'");
}

namespace {

void require_margin(const GridGeometry& geo, const PressureSlice& s, double p, double kappa) {
  const ScalarField margin = superflow_margin(geo, s.v, p, kappa);
  for (std::size_t q = 0; q < margin.size(); ++q) {
    if (!geo.chart.interior(q)) continue;
    if (margin[q] < -1e-10 * std::max(1.0, std::abs(kappa))) {
      std::ostringstream os;
      os << "flow inequality fails with kappa = " << kappa << " at t = " << s.t << ", node " << q
         << " (margin " << margin[q] << ")";
      throw Error(ErrorCode::HypothesisViolated, os.str());
    }
  }
}

}  // namespace

SlackField inequality_slack(InequalityKind kind, const GeometryContext& ctx, const PressureSlice& s,
                            const InequalityParams& ip) {
  if (!std::isfinite(ctx.m())) throw Error(ErrorCode::InvalidArgument, "the inequalities need a finite m");
  if (!(ip.p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (kind == InequalityKind::HBound && !(ip.s >= 2.0)) throw Error(ErrorCode::InvalidArgument, "s must be at least 2");
  const GridGeometry geo = GridGeometry::build(ctx, s.t);
  for (std::size_t q = 0; q < s.v.size(); ++q)
    if (!(s.v[q] > 0.0)) throw Error(ErrorCode::NonPositiveV, "pressure slice has a non-positive node");
  require_margin(geo, s, ip.p, ip.kappa);

  const double p = ip.p, m = ctx.m(), k = ip.kappa;
  const PressureDerivatives d = differentiate(geo, s, p);
  const std::size_t sz = s.v.size();
  std::vector<double> lhs(sz), rhs(sz);

  if (kind == InequalityKind::HBound) {
    const double sx = ip.s, qx = ip.q, eps = ip.eps;
    const double z = ip.zeta.value(s.t), dz = ip.zeta.derivative(s.t);
    const double a = eps - 2.0 * (qx * (p - 1.0) + 1.0) - (p - 1.0);
    const double omega = a * a + (p - 1.0) * (p - 1.0) * (m - 1.0) - 4.0 * (p - 1.0) / sx * qx * (qx * (p - 1.0) + p - eps);
    std::vector<double> h(sz), h_t(sz);
    for (std::size_t q = 0; q < sz; ++q) {
      const double v = s.v[q], g2 = d.grad2[q];
      const double vq = std::pow(v, qx), gs = std::pow(g2, 0.5 * sx);
      const double gs2 = g2 > 0.0 ? std::pow(g2, 0.5 * sx - 1.0) : (sx == 2.0 ? 1.0 : 0.0);
      h[q] = z * gs / vq + ip.gamma.value(v);
      h_t[q] = dz * gs / vq + z * (0.5 * sx * gs2 * d.dt_grad2[q] / vq - qx * gs * s.v_t[q] / (vq * v)) +
               ip.gamma.d1(v) * s.v_t[q];
    }
    const ScalarField hf(geo.chart, s.t, std::move(h));
    const ScalarField lap_h = f_laplacian(geo, hf);
    const ScalarField dv_dh = inner(geo, d.gv.covector, gradient(geo, hf).covector);
    for (std::size_t q = 0; q < sz; ++q) {
      const double v = s.v[q], g2 = d.grad2[q];
      const double vq = std::pow(v, qx), gs = std::pow(g2, 0.5 * sx);
      const double gs2 = g2 > 0.0 ? std::pow(g2, 0.5 * sx - 1.0) : (sx == 2.0 ? 1.0 : 0.0);
      lhs[q] = h_t[q] - (p - 1.0) * v * lap_h[q] - eps * dv_dh[q];
      rhs[q] = (dz + sx * k * z + z * (sx * s.sigma_v[q] - qx * s.sigma[q] / v)) * gs / vq +
               sx * z * omega / (4.0 * (p - 1.0)) * gs * g2 / (vq * v) + sx * z * gs2 / vq * d.dv_sigx[q] -
               (p - 1.0) * v * ip.gamma.d2(v) * g2 + ip.gamma.d1(v) * ((1.0 - eps) * g2 + s.sigma[q]);
    }
  } else {
    const double beta = kind == InequalityKind::OptimalW ? -1.0 / (p - 1.0) : ip.beta;
    const double eps = kind == InequalityKind::OptimalW ? p : ip.eps;
    std::vector<double> w(sz);
    for (std::size_t q = 0; q < sz; ++q) w[q] = d.grad2[q] / std::pow(s.v[q], beta);
    const ScalarField wf(geo.chart, s.t, std::move(w));
    const ScalarField lap_w = f_laplacian(geo, wf);
    const ScalarField dv_dw = inner(geo, d.gv.covector, gradient(geo, wf).covector);
    const double b1 = 1.0 + (p - 1.0) * beta;
    const double ga = eps - 2.0 * b1 - (p - 1.0);
    const double gam =
        ga * ga + (m - 1.0) * (p - 1.0) * (p - 1.0) - 2.0 * (p - 1.0) * beta * (1.0 + (p - 1.0) * (beta + 1.0) - eps);
    for (std::size_t q = 0; q < sz; ++q) {
      const double v = s.v[q], g2 = d.grad2[q];
      const double vb = std::pow(v, beta);
      const double wq = wf[q];
      const double w_t = d.dt_grad2[q] / vb - beta * g2 * s.v_t[q] / (vb * v);
      const double lw = w_t - (p - 1.0) * v * lap_w[q];
      const double sig = (2.0 * s.sigma_v[q] - beta * s.sigma[q] / v) * wq;
      const double sigx = 2.0 * d.dv_sigx[q] / vb;
      switch (kind) {
        case InequalityKind::SuperflowW:
          lhs[q] = lw;
          rhs[q] = 2.0 * k * wq + 2.0 * b1 * dv_dw[q] +
                   (p - 1.0) * (beta * beta - (p - 2.0) / (p - 1.0) * beta + 0.5 * m) * std::pow(v, beta - 1.0) * wq * wq +
                   sigx + sig;
          break;
        case InequalityKind::ShiftedW:
          lhs[q] = lw - eps * dv_dw[q];
          rhs[q] = gam / (2.0 * (p - 1.0)) * std::pow(v, beta - 1.0) * wq * wq - 2.0 * d.curv[q] / vb + sigx + sig;
          break;
        case InequalityKind::OptimalW:
          lhs[q] = lw - p * dv_dw[q];
          rhs[q] = ((m - 1.0) * (p - 1.0) * (p - 1.0) - 1.0) / (2.0 * (p - 1.0)) * wq * wq / std::pow(v, p / (p - 1.0)) +
                   2.0 * k * wq + 2.0 * std::pow(v, 1.0 / (p - 1.0)) * d.dv_sigx[q] +
                   (2.0 * s.sigma_v[q] + s.sigma[q] / ((p - 1.0) * v)) * wq;
          break;
        default: break;
      }
    }
  }
  std::vector<double> sl(sz), sc(sz);
  for (std::size_t q = 0; q < sz; ++q) {
    sl[q] = rhs[q] - lhs[q];
    sc[q] = std::max({std::abs(lhs[q]), std::abs(rhs[q]), 1.0});
  }
  SlackField out{ScalarField(geo.chart, s.t, std::move(sl)), ScalarField(geo.chart, s.t, std::move(sc))};
  out.slack.require_finite("inequality slack");
  return out;
}

ResidualReport check_inequality(InequalityKind kind, const GeometryContext& ctx,
                                const std::vector<PressureSlice>& slices, const InequalityParams& params) {
  if (slices.empty()) throw Error(ErrorCode::EmptyCylinder, "no slices to check");
  ResidualReport rep;
  rep.lemma = inequality_tag(kind);
  rep.levels = {ctx.chart().axis(0).resolution};
  for (const PressureSlice& s : slices) {
    const SlackField f = inequality_slack(kind, ctx, s, params);
    for (std::size_t q = 0; q < f.slack.size(); ++q) {
      if (!ctx.chart().interior(q)) continue;
      const double scaled = f.slack[q] / f.scale[q];
      rep.slack_min = std::min(rep.slack_min, f.slack[q]);
      if (scaled < rep.scaled_slack_min) {
        rep.scaled_slack_min = scaled;
        rep.argmin_x = ctx.chart().point(q);
        rep.argmin_t = s.t;
      }
    }
  }
  rep.pass = rep.scaled_slack_min >= -params.tol;
  return rep;
}

double minimal_kappa(const GeometryContext& ctx, const std::vector<PressureSlice>& slices, double p) {
  double kappa = 0.0;
  for (const PressureSlice& s : slices) {
    const ScalarField margin = superflow_margin(GridGeometry::build(ctx, s.t), s.v, p, 0.0);
    for (std::size_t q = 0; q < margin.size(); ++q)
      if (ctx.chart().interior(q)) kappa = std::max(kappa, -margin[q]);
  }
  return kappa;
}

}  // namespace pmelab
