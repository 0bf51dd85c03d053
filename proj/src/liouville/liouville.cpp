#include "pmelab/liouville.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"
#include "pmelab/pressure.hpp"

namespace pmelab {

std::string liouville_tag(LiouvilleTheorem th) {
  return th == LiouvilleTheorem::BetaAncient ? "beta-ancient" : "optimal-ancient";
}

LiouvilleTheorem parse_liouville(const std::string& tag) {
  if (tag == "beta-ancient") return LiouvilleTheorem::BetaAncient;
  if (tag == "optimal-ancient") return LiouvilleTheorem::OptimalAncient;
  throw Error(ErrorCode::UnknownCase, "unknown ancient-solution tag '" + tag + "'");
}

double u_growth_exponent(LiouvilleTheorem th, double p, double beta) {
  return th == LiouvilleTheorem::BetaAncient ? 2.0 / ((p - 1.0) * (2.0 - beta)) : 2.0 / (2.0 * p - 1.0);
}

double v_growth_exponent(LiouvilleTheorem th, double p, double beta) {
  return th == LiouvilleTheorem::BetaAncient ? 1.0 / (1.0 - 0.5 * beta) : (p - 1.0) / (p - 0.5);
}

std::vector<double> log_uniform_samples(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw Error(ErrorCode::InvalidArgument, "bad sample range");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) out[i] = std::exp(a + (b - a) * i / (count - 1));
  return out;
}

SignReport check_sign_hypothesis(LiouvilleTheorem th, const NonlinearitySpec& spec, double p, double beta,
                                 const std::vector<double>& u_samples) {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (th == LiouvilleTheorem::OptimalAncient) beta = -1.0 / (p - 1.0);
  const double coeff = th == LiouvilleTheorem::BetaAncient ? 2.0 * (2.0 - p) + beta * (p - 1.0) : 3.0 - 2.0 * p;
  const Vec3 x0{0.0, 0.0, 0.0};
  SignReport rep;
  rep.samples = static_cast<int>(u_samples.size());
  rep.min_expression = std::numeric_limits<double>::infinity();
  rep.min_n = std::numeric_limits<double>::infinity();
  bool holds = true;
  for (double u : u_samples) {
    if (!(u > 0.0)) throw Error(ErrorCode::NonPositiveInput, "u samples must be positive");
    const double nv = spec.value(0.0, x0, u), nu = spec.du(0.0, x0, u);
    const double expr = coeff * nv - 2.0 * u * nu;
    const double size = std::max({1.0, std::abs(coeff * nv), std::abs(2.0 * u * nu)});
    if (expr < -1e-12 * size) holds = false;
    if (expr < rep.min_expression) {
      rep.min_expression = expr;
      rep.argmin_u = u;
    }
    rep.min_n = std::min(rep.min_n, nv);

    const double v = pressure_of(u, p);
    const SigmaValues sv = sigma_from_nonlinearity(spec, p, 0.0, x0, v);
    const double lhs = 2.0 * sv.sigma_v - beta * sv.sigma / v;
    const double rhs = (2.0 * (p - 2.0) - beta * (p - 1.0)) * nv / u + 2.0 * nu;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    rep.equivalence_error = std::max(rep.equivalence_error, std::abs(lhs - rhs) / scale);
  }
  rep.holds = holds;
  rep.equivalence_ok = rep.equivalence_error <= 1e-10;
  return rep;
}

namespace {

// Dormand-Prince 5(4)
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

struct Step {
  double y = 0.0;
  double err = 0.0;
};

Step dp_step(const NonlinearitySpec& spec, double t, double y, double h) {
  const Vec3 x0{0.0, 0.0, 0.0};
  auto f = [&](double tt, double yy) { return spec.value(tt, x0, yy); };
  const double k1 = f(t, y);
  const double k2 = f(t + c2 * h, y + h * a21 * k1);
  const double k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
  const double k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const double k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const double k6 = f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  const double y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const double k7 = f(t + h, y5);
  const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return {y5, err};
}

}  // namespace

OdeResult integrate_ode(const NonlinearitySpec& spec, double u0, double t_end, double rtol, double atol) {
  if (!(u0 > 0.0)) throw Error(ErrorCode::NonPositiveInput, "u0 must be positive");
  if (t_end == 0.0) throw Error(ErrorCode::InvalidArgument, "empty integration window");
  const double dir = t_end > 0.0 ? 1.0 : -1.0;
  const double span = std::abs(t_end);
  OdeResult out;
  double t = 0.0, y = u0;
  double h = dir * std::min(1e-3, span);
  out.trajectory.emplace_back(t, y);
  while (dir * (t_end - t) > 0.0) {
    if (dir * (t + h - t_end) > 0.0) h = t_end - t;
    const Step st = dp_step(spec, t, y, h);
    const double sc = atol + rtol * std::max(std::abs(y), std::abs(st.y));
    const double err = std::isfinite(st.err) && std::isfinite(st.y) ? std::abs(st.err) / sc : 1e300;
    if (err <= 1.0) {
      ++out.steps;
      if (st.y <= 0.0) {
        double lo = 0.0, hi = 1.0;
        for (int it = 0; it < 200 && hi - lo > 1e-17; ++it) {
          const double mid = 0.5 * (lo + hi);
          (dp_step(spec, t, y, mid * h).y > 0.0 ? lo : hi) = mid;
        }
        const double tc = t + 0.5 * (lo + hi) * h;
        out.violation_time = tc;
        out.trajectory.emplace_back(tc, 0.0);
        return out;
      }
      t += h;
      y = st.y;
      out.trajectory.emplace_back(t, y);
      if (!std::isfinite(y) || std::abs(y) > 1e300) throw Error(ErrorCode::StiffBlowup, "solution escapes to infinity");
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-30), -0.2)));
    } else {
      ++out.rejected;
      h *= std::max(0.1, 0.9 * std::pow(err, -0.2));
    }
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t))) {
      std::ostringstream os;
      os << "step collapsed at t = " << t << ", u = " << y;
      throw Error(ErrorCode::StiffBlowup, os.str());
    }
  }
  return out;
}

OdeResult ancient_ode(const NonlinearitySpec& spec, double u0, double t_back) {
  if (!(t_back < 0.0)) throw Error(ErrorCode::InvalidArgument, "t_back must be negative");
  return integrate_ode(spec, u0, t_back);
}

GrowthReport growth_gate(LiouvilleTheorem th, double p, double beta, std::vector<std::pair<double, double>> ladder) {
  if (ladder.size() < 3) throw Error(ErrorCode::InsufficientLadder, "growth gate needs at least three R values");
  std::sort(ladder.begin(), ladder.end());
  GrowthReport rep;
  rep.exponent = v_growth_exponent(th, p, beta);
  const bool fam = th == LiouvilleTheorem::BetaAncient;
  const double eg = fam ? 1.0 - 0.5 * beta : 1.0 + 0.5 / (p - 1.0);
  const double et = fam ? 0.5 * (1.0 - beta) : p / (2.0 * (p - 1.0));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [R, M] : ladder) {
    if (!(R > 0.0) || !(M > 0.0)) throw Error(ErrorCode::InvalidArgument, "ladder entries must be positive");
    GrowthRung r{R, M, M * std::pow(R, -rep.exponent), std::pow(M, eg) / R, std::pow(M, et) / R};
    rep.rungs.push_back(r);
    const double lx = std::log(R), ly = std::log(r.quotient);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double nr = static_cast<double>(ladder.size());
  const double den = nr * sxx - sx * sx;
  if (!(den > 0.0)) throw Error(ErrorCode::InsufficientLadder, "ladder needs distinct R values");
  rep.slope = (nr * sxy - sx * sy) / den;
  rep.pass = rep.slope <= -0.05 && rep.rungs.back().quotient < rep.rungs.front().quotient;
  return rep;
}

LiouvilleVerdict liouville_verdict(const LiouvilleCase& c) {
  LiouvilleVerdict out;
  try {
    if (c.theorem == LiouvilleTheorem::BetaAncient) {
      if (!beta_admissible(c.p, c.m, c.beta)) throw Error(ErrorCode::ExponentOutOfRange, "beta outside (beta1, beta2)");
    } else if (!(c.p > 1.0 && c.p < second_family_p_limit(c.m))) {
      throw Error(ErrorCode::ExponentOutOfRange, "p outside (1, 1 + 1/sqrt(m-1))");
    }
    out.exponents_ok = true;
  } catch (const Error& e) {
    out.exponents_ok = false;
    out.exponent_message = e.what();
  }
  out.sign = check_sign_hypothesis(c.theorem, c.spec, c.p, c.beta, c.u_samples);
  out.a = c.a ? *c.a : out.sign.min_n;
  out.positivity_ok = out.a > 0.0 && out.sign.min_n >= out.a;
  out.ode = ancient_ode(c.spec, c.u0, c.t_back);
  if (out.positivity_ok) {
    out.bound_time = -c.u0 / out.a;
    if (out.ode.violation_time) out.bound_consistent = *out.ode.violation_time >= *out.bound_time - 1e-9;
  }
  if (!c.ladder.empty()) out.growth = growth_gate(c.theorem, c.p, c.beta, c.ladder);

  const bool hyp = out.exponents_ok && out.sign.holds && out.positivity_ok && (!out.growth || out.growth->pass);
  if (!hyp)
    out.verdict = "hypotheses-not-met";
  else if (out.ode.violation_time)
    out.verdict = "no-ancient-solution";
  else
    out.verdict = "inconclusive";
  return out;
}

}  // namespace pmelab
