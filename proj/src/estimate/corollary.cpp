#include "pmelab/corollary.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/pressure.hpp"
#include "pmelab/superflow.hpp"

namespace pmelab {

GammaAux GammaAux::zero() { return GammaAux(); }

GammaAux GammaAux::linear() {
  GammaAux g;
  g.kind_ = Kind::Linear;
  return g;
}

GammaAux GammaAux::power(double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "power Gamma needs p > 1");
  GammaAux g;
  g.kind_ = Kind::Power;
  g.p_ = p;
  return g;
}

GammaAux GammaAux::tabulated(std::vector<double> v, std::vector<double> values) {
  const std::size_t n = v.size();
  if (n < 3 || values.size() != n) throw Error(ErrorCode::InvalidArgument, "tabulated Gamma needs >= 3 matching points");
  for (std::size_t i = 1; i < n; ++i)
    if (!(v[i] > v[i - 1])) throw Error(ErrorCode::InvalidArgument, "tabulated Gamma abscissae must increase");
  GammaAux g;
  g.kind_ = Kind::Tabulated;
  g.xs_ = std::move(v);
  g.ys_ = std::move(values);
  // natural spline, tridiagonal solve
  std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), r(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = g.xs_[i] - g.xs_[i - 1], h1 = g.xs_[i + 1] - g.xs_[i];
    a[i] = h0 / 6.0;
    b[i] = (h0 + h1) / 3.0;
    c[i] = h1 / 6.0;
    r[i] = (g.ys_[i + 1] - g.ys_[i]) / h1 - (g.ys_[i] - g.ys_[i - 1]) / h0;
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    r[i] -= w * r[i - 1];
  }
  g.m_.assign(n, 0.0);
  g.m_[n - 1] = r[n - 1] / b[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) g.m_[i] = (r[i] - c[i] * g.m_[i + 1]) / b[i];
  return g;
}

std::string GammaAux::tag() const {
  switch (kind_) {
    case Kind::Zero: return "zero";
    case Kind::Linear: return "linear";
    case Kind::Power: return "power";
    case Kind::Tabulated: return "tabulated";
  }
  return "unknown";
}

namespace {

struct SplineEval {
  double y, d1, d2;
};

SplineEval spline_eval(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& m,
                       double x) {
  const std::size_t n = xs.size();
  auto seg = [&](std::size_t i, double xx) {
    const double h = xs[i + 1] - xs[i];
    const double A = (xs[i + 1] - xx) / h, B = (xx - xs[i]) / h;
    const double y = A * ys[i] + B * ys[i + 1] + ((A * A * A - A) * m[i] + (B * B * B - B) * m[i + 1]) * h * h / 6.0;
    const double d1 = (ys[i + 1] - ys[i]) / h - (3.0 * A * A - 1.0) * h * m[i] / 6.0 + (3.0 * B * B - 1.0) * h * m[i + 1] / 6.0;
    const double d2 = A * m[i] + B * m[i + 1];
    return SplineEval{y, d1, d2};
  };
  if (x <= xs.front()) {
    const SplineEval e = seg(0, xs.front());
    return {e.y + e.d1 * (x - xs.front()), e.d1, 0.0};
  }
  if (x >= xs.back()) {
    const SplineEval e = seg(n - 2, xs.back());
    return {e.y + e.d1 * (x - xs.back()), e.d1, 0.0};
  }
  const std::size_t i = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  return seg(std::min(i, n - 2), x);
}

}  // namespace

double GammaAux::value(double v) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Linear: return v;
    case Kind::Power: return (p_ - 1.0) * std::pow(v, p_ / (p_ - 1.0)) / (p_ * p_);
    case Kind::Tabulated: return spline_eval(xs_, ys_, m_, v).y;
  }
  return 0.0;
}

double GammaAux::d1(double v) const {
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Linear: return 1.0;
    case Kind::Power: return std::pow(v, 1.0 / (p_ - 1.0)) / p_;
    case Kind::Tabulated: return spline_eval(xs_, ys_, m_, v).d1;
  }
  return 0.0;
}

double GammaAux::d2(double v) const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::Linear: return 0.0;
    case Kind::Power: return std::pow(v, 1.0 / (p_ - 1.0) - 1.0) / (p_ * (p_ - 1.0));
    case Kind::Tabulated: return spline_eval(xs_, ys_, m_, v).d2;
  }
  return 0.0;
}

std::string Zeta::tag() const {
  switch (kind) {
    case Kind::One: return "one";
    case Kind::Exponential: return "exponential";
    case Kind::Decay: return "decay";
  }
  return "unknown";
}

double Zeta::value(double t) const {
  switch (kind) {
    case Kind::One: return 1.0;
    case Kind::Exponential: return std::exp(-s * (kappa + a) * t);
    case Kind::Decay: return t / (1.0 + 2.0 * kappa * t);
  }
  return 1.0;
}

double Zeta::derivative(double t) const {
  switch (kind) {
    case Kind::One: return 0.0;
    case Kind::Exponential: return -s * (kappa + a) * std::exp(-s * (kappa + a) * t);
    case Kind::Decay: {
      const double d = 1.0 + 2.0 * kappa * t;
      return 1.0 / (d * d);
    }
  }
  return 0.0;
}

std::string closed_bound_tag(ClosedBound b) { return b == ClosedBound::General ? "closed-general" : "closed-decay"; }

ClosedBound parse_closed_bound(const std::string& tag) {
  if (tag == "closed-general") return ClosedBound::General;
  if (tag == "closed-decay") return ClosedBound::Decay;
  throw Error(ErrorCode::UnknownCase, "unknown closed-manifold bound '" + tag + "'");
}

namespace {

void note(HypothesisCheck& h, double value, double scale, double t, const Vec3& x) {
  if (value > h.worst) {
    h.worst = value;
    h.t = t;
    h.x = x;
  }
  if (value > 1e-12 * std::max(scale, 1.0)) h.holds = false;
}

}  // namespace

CorollaryReport corollary_bound_check(ClosedBound bound, const GeometryContext& ctx, const SpaceTimeField& u,
                                      const NonlinearitySpec& spec, const CorollaryParams& par) {
  const double p = par.p;
  const double m = ctx.m();
  const double s = bound == ClosedBound::Decay ? 2.0 : par.s;
  if (!ctx.chart().all_periodic())
    throw Error(ErrorCode::HypothesisViolated, "closed manifold required: every chart axis must be periodic");
  if (s < 2.0) throw Error(ErrorCode::InvalidArgument, "s must be >= 2");
  const double lim = bound == ClosedBound::Decay ? second_family_p_limit(m) : closed_bound_p_limit(s, m);
  if (!(p > 1.0 && p <= lim)) {
    std::ostringstream os;
    os.precision(17);
    os << "p = " << p << " outside (1, " << lim << "]";
    throw Error(ErrorCode::ExponentOutOfRange, os.str());
  }
  if (bound == ClosedBound::Decay && par.kappa < 0.0)
    throw Error(ErrorCode::HypothesisViolated, "kappa must be >= 0");

  const GammaAux gamma = bound == ClosedBound::Decay ? GammaAux::power(p) : par.gamma;
  const double a = bound == ClosedBound::Decay ? 0.0 : par.a;
  const double gexp = s / (2.0 * (s - 1.0) * (p - 1.0));
  const Chart& chart = ctx.chart();
  const SpaceTimeField v = pressure_transform(u, p);
  const auto& times = v.times();
  const double t_origin = times.front();

  CorollaryReport rep;
  rep.bound = bound;
  std::vector<HypothesisCheck> hyp;
  if (bound == ClosedBound::General) {
    hyp = {{"gamma_prime_sigma_nonpositive"},
           {"gamma_prime_plus_v_gamma_second_nonnegative"},
           {"grad_v_dot_sigma_x_nonpositive"},
           {"sigma_v_bounded_by_a"},
           {"superflow"}};
  } else {
    hyp = {{"sigma_nonpositive"}, {"grad_v_dot_sigma_x_nonpositive"}, {"sigma_v_nonpositive"}, {"superflow"}};
  }

  std::vector<GridGeometry> cache;
  auto geometry_at = [&](double t) -> const GridGeometry& {
    if (cache.empty() || (!ctx.is_static() && cache.front().t != t)) cache.assign(1, GridGeometry::build(ctx, t));
    return cache.front();
  };

  struct FrameData {
    std::vector<double> lhs_power;  // v^{gexp} |grad v|^s
  };
  std::vector<FrameData> frames(times.size());
  for (std::size_t f = 0; f < times.size(); ++f) {
    const double t = times[f];
    const GridGeometry& geo = geometry_at(t);
    const ScalarField vf = v.frame(f);
    const GradientField gv = gradient(geo, vf);
    const SigmaFields sig = sigma_fields(spec, p, vf);
    const ScalarField margin = superflow_margin(geo, vf, p, par.kappa);
    frames[f].lhs_power.resize(vf.size());
    for (std::size_t q = 0; q < vf.size(); ++q) {
      const double vv = vf[q];
      const double g2 = std::max(gv.norm2[q], 0.0);
      frames[f].lhs_power[q] = std::pow(vv, gexp) * std::pow(g2, s / 2.0);
      double dvsx = 0.0;
      for (int i = 0; i < geo.n; ++i) dvsx += gv.vector[q][i] * sig.sigma_x[q][i];
      const Vec3 x = chart.point(q);
      const double sc = std::abs(sig.sigma[q]) + std::abs(sig.sigma_v[q]);
      if (bound == ClosedBound::General) {
        note(hyp[0], gamma.d1(vv) * sig.sigma[q], sc, t, x);
        note(hyp[1], -(gamma.d1(vv) + vv * gamma.d2(vv)), std::abs(gamma.d1(vv)), t, x);
        note(hyp[2], dvsx, sc, t, x);
        note(hyp[3], sig.sigma_v[q] + sig.sigma[q] / (2.0 * (s - 1.0) * (p - 1.0) * vv) - a, sc, t, x);
        note(hyp[4], -margin[q], std::abs(par.kappa) + 1.0, t, x);
      } else {
        note(hyp[0], sig.sigma[q], sc, t, x);
        note(hyp[1], dvsx, sc, t, x);
        note(hyp[2], sig.sigma_v[q] + sig.sigma[q] / (2.0 * (p - 1.0) * vv), sc, t, x);
        note(hyp[3], -margin[q], std::abs(par.kappa) + 1.0, t, x);
      }
    }
  }
  rep.hypotheses = hyp;
  for (const HypothesisCheck& h : hyp) {
    if (!h.holds) {
      std::ostringstream os;
      os.precision(17);
      os << "hypothesis '" << h.name << "' fails (worst value " << h.worst << " at t = " << h.t << ", x = ("
         << h.x[0] << ", " << h.x[1] << ", " << h.x[2] << "))";
      throw Error(ErrorCode::HypothesisViolated, os.str());
    }
  }

  const auto& v0 = v.frame_values(0);
  double max0 = -std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < v0.size(); ++q) {
    const double h0 = bound == ClosedBound::General ? frames[0].lhs_power[q] + gamma.value(v0[q])
                                                    : std::pow(v0[q], p / (p - 1.0));
    max0 = std::max(max0, h0);
  }

  rep.min_slack = std::numeric_limits<double>::infinity();
  rep.min_scaled_slack = std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < times.size(); ++f) {
    const double t = times[f] - t_origin;
    const auto& vf = v.frame_values(f);
    std::vector<double> sl(vf.size());
    double fmin = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < vf.size(); ++q) {
      double lhs, rhs;
      if (bound == ClosedBound::General) {
        lhs = frames[f].lhs_power[q];
        rhs = std::exp(s * (par.kappa + a) * t) * (max0 - gamma.value(vf[q]));
      } else {
        lhs = p * p * t / (1.0 + 2.0 * par.kappa * t) * frames[f].lhs_power[q];
        rhs = (p - 1.0) * (max0 - std::pow(vf[q], p / (p - 1.0)));
      }
      sl[q] = rhs - lhs;
      fmin = std::min(fmin, sl[q]);
      const double scaled = sl[q] / std::max({std::abs(lhs), std::abs(rhs), 1.0});
      if (scaled < rep.min_scaled_slack) {
        rep.min_scaled_slack = scaled;
        rep.worst_t = times[f];
        rep.worst_x = chart.point(q);
      }
    }
    rep.min_slack = std::min(rep.min_slack, fmin);
    rep.min_slack_per_time.push_back(fmin);
    rep.times.push_back(times[f]);
    rep.slack.emplace_back(chart, times[f], std::move(sl));
  }
  rep.pass = rep.min_scaled_slack >= -par.tol;
  return rep;
}

}  // namespace pmelab
