#include "pmelab/identities.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/convergence.hpp"
#include "pmelab/error.hpp"

namespace pmelab {

std::string lemma_tag(Lemma lemma) {
  switch (lemma) {
    case Lemma::PressureEvolution: return "pressure-evolution";
    case Lemma::WEvolution: return "w-evolution";
    case Lemma::ProductRule: return "product-rule";
    case Lemma::HFunctional: return "h-functional";
    case Lemma::ShiftedW: return "shifted-w";
  }
  return "?";
}

Lemma parse_lemma(const std::string& tag) {
  for (Lemma l : {Lemma::PressureEvolution, Lemma::WEvolution, Lemma::ProductRule, Lemma::HFunctional,
                  Lemma::ShiftedW})
    if (lemma_tag(l) == tag) return l;
  throw Error(ErrorCode::UnknownCase, "unknown identity tag '" + tag + "'");
}

double order_floor(Lemma lemma) {
  switch (lemma) {
    case Lemma::PressureEvolution:
    case Lemma::ProductRule: return 1.9;
    default: return 1.5;
  }
}

void IdentityCase::validate() const {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (levels.empty()) throw Error(ErrorCode::InvalidArgument, "no grid levels");
  for (int l : levels)
    if (l < 8) throw Error(ErrorCode::InvalidArgument, "grid level below 8");
  if (lemma == Lemma::HFunctional && !(s >= 2.0)) throw Error(ErrorCode::InvalidArgument, "s must be at least 2");
  if (lemma == Lemma::ProductRule && !(coefficient_v > 0.0))
    throw Error(ErrorCode::NonPositiveV, "operator coefficient v must be positive");
  if (!std::isfinite(beta) || !std::isfinite(eps) || !std::isfinite(q))
    throw Error(ErrorCode::InvalidArgument, "exponents must be finite");
  if (lemma == Lemma::WEvolution || lemma == Lemma::HFunctional || lemma == Lemma::ShiftedW) {
    const int n = geometry.n;
    const bool has_potential = geometry.potential != "zero" && geometry.potential != "constant";
    if (std::isfinite(geometry.m) && (geometry.m < n || (geometry.m == n && has_potential)))
      throw Error(ErrorCode::DegenerateDimension, "the f-gradient term needs m > n when f is not constant");
  }
}

namespace {

IdentityResidual finish(const Chart& chart, double t, const std::vector<double>& lhs, const std::vector<double>& rhs) {
  std::vector<double> r(lhs.size()), sc(lhs.size());
  for (std::size_t q = 0; q < lhs.size(); ++q) {
    r[q] = lhs[q] - rhs[q];
    sc[q] = std::max({std::abs(lhs[q]), std::abs(rhs[q]), 1.0});
  }
  IdentityResidual out{ScalarField(chart, t, std::move(r)), ScalarField(chart, t, std::move(sc))};
  out.residual.require_finite("identity residual");
  return out;
}

IdentityResidual pressure_residual(const GridGeometry& geo, const PressureSlice& s, const PressureDerivatives& d,
                                   double p) {
  std::vector<double> lhs(s.v.size()), rhs(s.v.size());
  for (std::size_t q = 0; q < lhs.size(); ++q) {
    lhs[q] = s.v_t[q] - (p - 1.0) * s.v[q] * d.lap_f[q];
    rhs[q] = d.grad2[q] + s.sigma[q];
  }
  return finish(geo.chart, s.t, lhs, rhs);
}

// w = |grad v|^2 / v^beta, its time derivative and grid Delta_f.
struct WField {
  ScalarField w;
  std::vector<double> w_t;
  ScalarField lap_w;
  ScalarField dv_dw;
};

WField w_field(const GridGeometry& geo, const PressureSlice& s, const PressureDerivatives& d, double beta) {
  const std::size_t sz = s.v.size();
  std::vector<double> w(sz);
  WField out;
  out.w_t.resize(sz);
  for (std::size_t q = 0; q < sz; ++q) {
    const double vb = std::pow(s.v[q], beta);
    w[q] = d.grad2[q] / vb;
    out.w_t[q] = d.dt_grad2[q] / vb - beta * d.grad2[q] * s.v_t[q] / (vb * s.v[q]);
  }
  out.w = ScalarField(geo.chart, s.t, std::move(w));
  out.lap_w = f_laplacian(geo, out.w);
  out.dv_dw = inner(geo, d.gv.covector, gradient(geo, out.w).covector);
  return out;
}

IdentityResidual w_residual(const GridGeometry& geo, const PressureSlice& s, const PressureDerivatives& d, double p,
                            double beta) {
  const WField wf = w_field(geo, s, d, beta);
  std::vector<double> lhs(s.v.size()), rhs(s.v.size());
  for (std::size_t q = 0; q < lhs.size(); ++q) {
    const double v = s.v[q], g2 = d.grad2[q];
    const double vb = std::pow(v, beta);
    const double dv_dsigma = d.dv_sigx[q] + s.sigma_v[q] * g2;
    lhs[q] = wf.w_t[q] - (p - 1.0) * v * wf.lap_w[q];
    rhs[q] = -2.0 * d.curv[q] / vb +
             2.0 * (p - 1.0) / vb * (g2 * d.lap_f[q] - v * d.hess.norm2[q] - v * d.dfdv2_m[q]) +
             2.0 * (1.0 + beta * (p - 1.0)) * d.dv_dg2[q] / vb - beta * g2 * s.sigma[q] / (vb * v) -
             beta * (1.0 + (p - 1.0) * (beta + 1.0)) * g2 * g2 / (vb * v) + 2.0 * dv_dsigma / vb;
  }
  return finish(geo.chart, s.t, lhs, rhs);
}

IdentityResidual shifted_residual(const GridGeometry& geo, const PressureSlice& s, const PressureDerivatives& d,
                                  double p, double beta, double eps) {
  const WField wf = w_field(geo, s, d, beta);
  std::vector<double> lhs(s.v.size()), rhs(s.v.size());
  for (std::size_t q = 0; q < lhs.size(); ++q) {
    const double v = s.v[q], g2 = d.grad2[q];
    const double vb = std::pow(v, beta);
    const double lap = d.lap_f[q] + d.df_dv[q];
    lhs[q] = wf.w_t[q] - (p - 1.0) * v * wf.lap_w[q] - eps * wf.dv_dw[q];
    rhs[q] = -2.0 * (p - 1.0) * d.hess.norm2[q] * v / vb + 2.0 * (p - 1.0) * g2 * lap / vb -
             (2.0 * eps - 4.0 * (1.0 + (p - 1.0) * beta)) * 0.5 * d.dv_dg2[q] / vb - 2.0 * d.curv[q] / vb -
             2.0 * (p - 1.0) * v / vb * (g2 * d.df_dv[q] / v + d.dfdv2_m[q]) -
             beta * (1.0 + (p - 1.0) * (beta + 1.0) - eps) * g2 * g2 / (vb * v) + 2.0 * d.dv_sigx[q] / vb +
             (2.0 * s.sigma_v[q] - beta * s.sigma[q] / v) * g2 / vb;
  }
  return finish(geo.chart, s.t, lhs, rhs);
}

IdentityResidual h_residual(const GridGeometry& geo, const PressureSlice& s, const PressureDerivatives& d,
                            const IdentityCase& c) {
  const double p = c.p, sx = c.s, qx = c.q, eps = c.eps;
  const double z = c.zeta.value(s.t), dz = c.zeta.derivative(s.t);
  const std::size_t sz = s.v.size();
  std::vector<double> h(sz), h_t(sz);
  for (std::size_t q = 0; q < sz; ++q) {
    const double v = s.v[q], g2 = d.grad2[q];
    const double vq = std::pow(v, qx);
    const double gs = std::pow(g2, 0.5 * sx);
    const double gs2 = g2 > 0.0 ? std::pow(g2, 0.5 * sx - 1.0) : (sx == 2.0 ? 1.0 : 0.0);
    h[q] = z * gs / vq + c.gamma.value(v);
    h_t[q] = dz * gs / vq + z * (0.5 * sx * gs2 * d.dt_grad2[q] / vq - qx * gs * s.v_t[q] / (vq * v)) +
             c.gamma.d1(v) * s.v_t[q];
  }
  const ScalarField hf(geo.chart, s.t, std::move(h));
  const ScalarField lap_h = f_laplacian(geo, hf);
  const ScalarField dv_dh = inner(geo, d.gv.covector, gradient(geo, hf).covector);
  std::vector<double> lhs(sz), rhs(sz);
  for (std::size_t q = 0; q < sz; ++q) {
    const double v = s.v[q], g2 = d.grad2[q];
    const double vq = std::pow(v, qx);
    const double gs = std::pow(g2, 0.5 * sx);
    const double gs2 = g2 > 0.0 ? std::pow(g2, 0.5 * sx - 1.0) : (sx == 2.0 ? 1.0 : 0.0);
    double chain = 0.0;
    if (sx != 2.0 && g2 > 0.0) chain = 0.5 * (sx - 2.0) * std::pow(g2, 0.5 * sx - 2.0) * d.g2.norm2[q];
    const double dv_dsigma = d.dv_sigx[q] + s.sigma_v[q] * g2;
    const double bracket = sx * (p - 1.0) * (g2 * d.lap_f[q] - v * d.hess.norm2[q] - v * d.dfdv2_m[q]) +
                           sx * (qx * (p - 1.0) + 1.0 - 0.5 * eps) * d.dv_dg2[q] -
                           qx * (qx * (p - 1.0) + p - eps) * g2 * g2 / v;
    lhs[q] = h_t[q] - (p - 1.0) * v * lap_h[q] - eps * dv_dh[q];
    rhs[q] = dz * gs / vq - sx * z * gs2 / vq * d.curv[q] + z * gs2 / vq * bracket -
             z * sx * (p - 1.0) * v / (2.0 * vq) * chain + sx * z * gs2 / vq * dv_dsigma -
             qx * z * gs * s.sigma[q] / (vq * v) - (p - 1.0) * v * c.gamma.d2(v) * g2 +
             c.gamma.d1(v) * ((1.0 - eps) * g2 + s.sigma[q]);
  }
  return finish(geo.chart, s.t, lhs, rhs);
}

IdentityResidual product_residual(const GeometryContext& ctx, const GridGeometry& geo, const IdentityCase& c) {
  const PressureExpr ue = pressure_catalog(c.pressure), we = pressure_catalog(c.second);
  const double t = c.t, p = c.p, v = c.coefficient_v;
  const Chart& chart = ctx.chart();
  const ScalarField u = ScalarField::sample(chart, t, [&](const Vec3& x) { return ue.value(x, t); });
  const ScalarField w = ScalarField::sample(chart, t, [&](const Vec3& x) { return we.value(x, t); });
  const ScalarField u_t = ScalarField::sample(chart, t, [&](const Vec3& x) { return ue.dt(x, t); });
  const ScalarField w_t = ScalarField::sample(chart, t, [&](const Vec3& x) { return we.dt(x, t); });
  const ScalarField uw = zip_field(u, w, [](double a, double b) { return a * b; });
  const ScalarField lap_u = f_laplacian(geo, u), lap_w = f_laplacian(geo, w), lap_uw = f_laplacian(geo, uw);
  const GradientField gu = gradient(geo, u), guw = gradient(geo, uw);
  const ScalarField du_duw = inner(geo, gu.covector, guw.covector);
  std::vector<double> lhs(u.size()), rhs(u.size());
  for (std::size_t q = 0; q < u.size(); ++q) {
    const double uwt = u_t[q] * w[q] + u[q] * w_t[q];
    const double l_uw = uwt - (p - 1.0) * v * lap_uw[q];
    const double l_u = u_t[q] - (p - 1.0) * v * lap_u[q];
    const double l_w = w_t[q] - (p - 1.0) * v * lap_w[q];
    lhs[q] = u[q] * l_uw;
    rhs[q] = u[q] * w[q] * l_u - 2.0 * (p - 1.0) * v * (du_duw[q] - gu.norm2[q] * w[q]) + u[q] * u[q] * l_w;
  }
  return finish(chart, t, lhs, rhs);
}

}  // namespace

IdentityResidual identity_residual(const IdentityCase& c, int resolution) {
  c.validate();
  const GeometryContext ctx = c.geometry.build(resolution);
  const GridGeometry geo = GridGeometry::build(ctx, c.t);
  if (c.lemma == Lemma::ProductRule) return product_residual(ctx, geo, c);
  const PressureSlice s = manufactured_slice(ctx, geo, pressure_catalog(c.pressure), c.p, c.t);
  const PressureDerivatives d = differentiate(geo, s, c.p);
  switch (c.lemma) {
    case Lemma::PressureEvolution: return pressure_residual(geo, s, d, c.p);
    case Lemma::WEvolution: return w_residual(geo, s, d, c.p, c.beta);
    case Lemma::ShiftedW: return shifted_residual(geo, s, d, c.p, c.beta, c.eps);
    case Lemma::HFunctional: return h_residual(geo, s, d, c);
    default: break;
  }
  throw Error(ErrorCode::UnknownCase, "unhandled identity");
}

ResidualReport check_identity(const IdentityCase& c) {
  c.validate();
  ResidualReport rep;
  rep.lemma = lemma_tag(c.lemma);
  rep.levels = c.levels;
  rep.order_floor = order_floor(c.lemma);
  rep.exact = true;
  for (int level : c.levels) {
    const IdentityResidual r = identity_residual(c, level);
    double worst = 0.0, worst_scaled = 0.0;
    for (std::size_t q = 0; q < r.residual.size(); ++q) {
      if (!r.residual.chart().interior(q)) continue;
      worst = std::max(worst, std::abs(r.residual[q]));
      worst_scaled = std::max(worst_scaled, std::abs(r.residual[q]) / r.scale[q]);
    }
    rep.residual_max.push_back(worst);
    rep.scaled_max.push_back(worst_scaled);
    if (worst_scaled > 1e-10) rep.exact = false;
  }
  rep.orders = observed_orders(rep.residual_max, 1e-11);
  rep.observed_order = rep.orders.empty() ? 0.0 : *std::min_element(rep.orders.begin(), rep.orders.end());
  rep.pass = rep.exact || rep.observed_order >= rep.order_floor;
  return rep;
}

ResidualReport check_pressure_evolution(IdentityCase c) {
  c.lemma = Lemma::PressureEvolution;
  return check_identity(c);
}
ResidualReport check_w_evolution(IdentityCase c) {
  c.lemma = Lemma::WEvolution;
  return check_identity(c);
}
ResidualReport check_product_rule(IdentityCase c) {
  c.lemma = Lemma::ProductRule;
  return check_identity(c);
}
ResidualReport check_H_functional(IdentityCase c) {
  c.lemma = Lemma::HFunctional;
  return check_identity(c);
}
ResidualReport check_shifted_w(IdentityCase c) {
  c.lemma = Lemma::ShiftedW;
  return check_identity(c);
}

}  // namespace pmelab
