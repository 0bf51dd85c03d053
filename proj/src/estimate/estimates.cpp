#include "pmelab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

namespace {

struct FamilyPowers {
  double a;  // exponent of M on the sqrt(h) and time terms
  double b;  // exponent of M on the curvature term
};

FamilyPowers powers(Theorem th, double p, double beta) {
  if (is_beta_family(th)) return {(1.0 - beta) / 2.0, 1.0 - beta / 2.0};
  return {p / (2.0 * (p - 1.0)), 1.0 + 1.0 / (2.0 * (p - 1.0))};
}

double time_tolerance(double t0, double T) { return 1e-9 * std::max({1.0, std::abs(t0), T}); }

}  // namespace

std::string theorem_tag(Theorem th) {
  switch (th) {
    case Theorem::BetaLocal: return "beta-local";
    case Theorem::BetaGlobal: return "beta-global";
    case Theorem::BetaStatic: return "beta-static";
    case Theorem::OptimalLocal: return "optimal-local";
    case Theorem::OptimalGlobal: return "optimal-global";
    case Theorem::OptimalStatic: return "optimal-static";
  }
  return "unknown";
}

Theorem parse_theorem(const std::string& tag) {
  for (Theorem th : {Theorem::BetaLocal, Theorem::BetaGlobal, Theorem::BetaStatic, Theorem::OptimalLocal,
                     Theorem::OptimalGlobal, Theorem::OptimalStatic})
    if (theorem_tag(th) == tag) return th;
  throw Error(ErrorCode::UnknownCase, "unknown estimate tag '" + tag + "'");
}

bool is_beta_family(Theorem th) {
  return th == Theorem::BetaLocal || th == Theorem::BetaGlobal || th == Theorem::BetaStatic;
}
bool is_global(Theorem th) { return th == Theorem::BetaGlobal || th == Theorem::OptimalGlobal; }
bool is_static(Theorem th) { return th == Theorem::BetaStatic || th == Theorem::OptimalStatic; }

void check_estimate_exponents(Theorem th, double p, double m, double beta) {
  std::ostringstream os;
  os.precision(17);
  if (is_beta_family(th)) {
    const BetaRange r = beta_admissible_range(p, m);
    if (!(beta > r.beta1 && beta < r.beta2)) {
      os << "beta = " << beta << " outside (" << r.beta1 << ", " << r.beta2 << ") for p = " << p << ", m = " << m;
      throw Error(ErrorCode::ExponentOutOfRange, os.str());
    }
  } else {
    const double lim = second_family_p_limit(m);
    if (!(p > 1.0 && p < lim)) {
      os << "p = " << p << " outside (1, " << lim << ") for m = " << m;
      throw Error(ErrorCode::ExponentOutOfRange, os.str());
    }
  }
}

std::vector<RhsTerm> rhs_terms(Theorem th, const RhsInputs& in) {
  const FamilyPowers pw = powers(th, in.p, in.beta);
  const double elapsed = in.t - in.t0 + in.T;
  if (!(elapsed > 0.0)) throw Error(ErrorCode::EmptyCylinder, "slice time must exceed t0 - T");
  const double ma = std::pow(in.M, pw.a);
  const double mb = std::pow(in.M, pw.b);
  std::vector<RhsTerm> terms;
  if (!is_static(th)) terms.push_back({"sqrt_h", std::sqrt(in.h) * ma});
  double bracket = std::sqrt(in.k);
  if (!is_global(th)) bracket += std::pow(in.k, 0.25) / std::sqrt(in.R) + 1.0 / in.R;
  terms.push_back({"curvature", bracket * mb});
  terms.push_back({"time", ma / std::sqrt(elapsed)});
  terms.push_back({"sigma_x", in.sup_sigma_x});
  terms.push_back({"sigma_v", in.sup_sigma_v});
  return terms;
}

double rhs_total(const std::vector<RhsTerm>& terms) {
  double s = 0.0;
  for (const RhsTerm& t : terms) s += t.value;
  return s;
}

double sigma_x_integrand(Theorem th, double p, double beta, double v, double sigma_x_norm) {
  if (is_beta_family(th)) return std::cbrt(sigma_x_norm / std::pow(v, (3.0 * beta - 2.0) / 2.0));
  return std::cbrt(std::pow(v, (2.0 * p + 1.0) / (2.0 * (p - 1.0))) * sigma_x_norm);
}

double sigma_v_integrand(Theorem th, double p, double beta, double v, double sigma, double sigma_v) {
  if (is_beta_family(th)) {
    const double z = std::max(2.0 * sigma_v - beta * sigma / v, 0.0);
    return std::pow(v, (1.0 - beta) / 2.0) * std::sqrt(z);
  }
  const double z = std::max(2.0 * sigma_v + sigma / ((p - 1.0) * v), 0.0);
  return std::pow(v, p / (2.0 * (p - 1.0))) * std::sqrt(z);
}

double estimate_lhs(Theorem th, double p, double beta, double v, double grad_norm) {
  if (is_beta_family(th)) return grad_norm / std::pow(v, beta / 2.0);
  return std::pow(v, 1.0 / (2.0 * (p - 1.0))) * grad_norm;
}

ScalarField w_field(const GridGeometry& geo, const ScalarField& v, double beta) {
  if (!(v.min() > 0.0)) throw Error(ErrorCode::NonPositiveInput, "w needs v > 0");
  const ScalarField g2 = gradient(geo, v).norm2;
  return zip_field(g2, v, [beta](double a, double b) { return a / std::pow(b, beta); });
}

SpaceTimeField w_field(const GeometryContext& ctx, const SpaceTimeField& v, double beta) {
  std::vector<std::vector<double>> frames;
  std::vector<GridGeometry> geos;
  for (std::size_t k = 0; k < v.frame_count(); ++k) {
    if (geos.empty() || !ctx.is_static()) geos.assign(1, GridGeometry::build(ctx, v.times()[k]));
    frames.push_back(w_field(geos.front(), v.frame(k), beta).values());
  }
  return SpaceTimeField(v.chart(), v.times(), std::move(frames));
}

double EstimateContext::m() const { return ctx ? ctx->m() : 0.0; }

EstimateContext make_estimate_context(const GeometryContext& ctx, const SpaceTimeField& u, const NonlinearitySpec& spec,
                                      double p, double beta, const Cylinder& cyl, double k, double h, bool global) {
  if (!(cyl.R > 0.0) || !(cyl.T > 0.0)) throw Error(ErrorCode::EmptyCylinder, "cylinder needs R > 0 and T > 0");
  if (u.chart() != ctx.chart()) throw Error(ErrorCode::ShapeMismatch, "solution chart differs from geometry chart");
  EstimateContext e;
  e.ctx = &ctx;
  e.p = p;
  e.beta = beta;
  e.cyl = cyl;
  e.k = k;
  e.h = h;
  e.v = pressure_transform(u, p);
  const Chart& chart = ctx.chart();
  if (!global) e.distance = model_distance_for(ctx, cyl.x0);
  const double tol = time_tolerance(cyl.t0, cyl.T);
  const auto& times = e.v.times();
  e.sigma.resize(times.size());
  for (std::size_t f = 0; f < times.size(); ++f) {
    const double t = times[f];
    if (t < cyl.t0 - cyl.T - tol || t > cyl.t0 + tol) continue;
    e.window.push_back(f);
    const ScalarField vf = e.v.frame(f);
    e.sigma[f] = sigma_fields(spec, p, vf);
    std::vector<char> r(vf.size(), 1), half(vf.size(), 1);
    if (!global) {
      for (std::size_t q = 0; q < vf.size(); ++q) {
        const double rho = e.distance(chart.point(q), t).first;
        r[q] = rho <= cyl.R;
        half[q] = rho <= cyl.R / 2.0;
      }
    }
    for (std::size_t q = 0; q < vf.size(); ++q)
      if (r[q]) e.M = std::max(e.M, vf[q]);
    e.in_r.push_back(std::move(r));
    e.in_half.push_back(std::move(half));
  }
  if (e.window.empty()) throw Error(ErrorCode::EmptyCylinder, "no stored time inside [t0 - T, t0]");
  return e;
}

EstimateReport hsz_rhs(Theorem th, const EstimateContext& e) {
  if (e.ctx == nullptr) throw Error(ErrorCode::InvalidArgument, "estimate context has no geometry");
  const GeometryContext& ctx = *e.ctx;
  check_estimate_exponents(th, e.p, ctx.m(), e.beta);
  EstimateReport rep;
  rep.theorem = th;
  rep.p = e.p;
  rep.m = ctx.m();
  rep.beta = e.beta;
  rep.M = e.M;
  rep.k = e.k;
  rep.h = is_static(th) ? 0.0 : e.h;
  rep.cyl = e.cyl;
  const Chart& chart = ctx.chart();
  const double tol = time_tolerance(e.cyl.t0, e.cyl.T);

  std::vector<GridGeometry> geos;
  auto geometry_at = [&](double t) -> const GridGeometry& {
    if (ctx.is_static()) {
      if (geos.empty()) geos.push_back(GridGeometry::build(ctx, t));
      return geos.front();
    }
    geos.assign(1, GridGeometry::build(ctx, t));
    return geos.front();
  };

  // Sup-terms over Q_{R,T}.
  for (std::size_t w = 0; w < e.window.size(); ++w) {
    const std::size_t f = e.window[w];
    const double t = e.v.times()[f];
    const GridGeometry& geo = geometry_at(t);
    const auto& vf = e.v.frame_values(f);
    const SigmaFields& s = e.sigma[f];
    for (std::size_t q = 0; q < vf.size(); ++q) {
      if (!e.in_r[w][q]) continue;
      double nx = 0.0;
      for (int i = 0; i < geo.n; ++i)
        for (int j = 0; j < geo.n; ++j) nx += geo.ginv[q][i][j] * s.sigma_x[q][i] * s.sigma_x[q][j];
      rep.sup_sigma_x = std::max(rep.sup_sigma_x, sigma_x_integrand(th, e.p, e.beta, vf[q], std::sqrt(nx)));
      rep.sup_sigma_v =
          std::max(rep.sup_sigma_v, sigma_v_integrand(th, e.p, e.beta, vf[q], s.sigma[q], s.sigma_v[q]));
    }
  }

  for (std::size_t w = 0; w < e.window.size(); ++w) {
    const std::size_t f = e.window[w];
    const double t = e.v.times()[f];
    if (t <= e.cyl.t0 - e.cyl.T + tol) continue;
    RhsInputs in{e.p, e.beta, e.M, e.k, rep.h, e.cyl.R, e.cyl.T, e.cyl.t0, t, rep.sup_sigma_x, rep.sup_sigma_v};
    SliceRhs slice;
    slice.t = t;
    slice.terms = rhs_terms(th, in);
    slice.total = rhs_total(slice.terms);
    const GridGeometry& geo = geometry_at(t);
    const ScalarField vf = e.v.frame(f);
    const GradientField gv = gradient(geo, vf);
    for (std::size_t q = 0; q < vf.size(); ++q) {
      if (!e.in_half[w][q]) continue;
      EstimateSample smp;
      smp.frame = f;
      smp.node = q;
      smp.t = t;
      smp.x = chart.point(q);
      smp.lhs = estimate_lhs(th, e.p, e.beta, vf[q], std::sqrt(std::max(gv.norm2[q], 0.0)));
      smp.rhs = slice.total;
      if (smp.lhs == 0.0)
        smp.ratio = 0.0;
      else if (smp.rhs > 0.0)
        smp.ratio = smp.lhs / smp.rhs;
      else
        smp.ratio = std::numeric_limits<double>::infinity();
      rep.samples.push_back(smp);
    }
    rep.slices.push_back(std::move(slice));
  }
  if (rep.samples.empty()) throw Error(ErrorCode::EmptyCylinder, "no samples in Q_{R/2,T} with t > t0 - T");
  return rep;
}

EstimateReport verify_estimate(const EstimateContext& ectx, EstimateReport rep, CMode mode) {
  (void)ectx;
  if (rep.samples.empty()) throw Error(ErrorCode::EmptyCylinder, "report holds no samples");
  rep.sup_ratio = -1.0;
  for (const EstimateSample& s : rep.samples) {
    if (s.ratio > rep.sup_ratio) {
      rep.sup_ratio = s.ratio;
      rep.argsup = s;
    }
  }
  rep.calibrated = mode.calibrate;
  if (mode.calibrate) {
    rep.c = rep.sup_ratio;
    rep.pass = std::isfinite(rep.sup_ratio);
  } else {
    rep.c = mode.c;
    rep.pass = rep.sup_ratio <= mode.c * (1.0 + 1e-12);
  }
  return rep;
}

}  // namespace pmelab
