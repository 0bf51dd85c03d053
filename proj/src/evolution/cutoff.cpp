#include "pmelab/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pmelab/error.hpp"

namespace pmelab {

SmoothStep smooth_step(double s) {
  if (s <= 0.0) return {0.0, 0.0, 0.0};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double r = 1.0 - s;
  const double z = 1.0 / s - 1.0 / r;
  // L = 1/(1+e^z) and 1-L = 1/(1+e^{-z}), each evaluated without overflow
  double L, M;
  if (z > 0.0) {
    const double ez = std::exp(-z);
    L = ez / (1.0 + ez);
    M = 1.0 / (1.0 + ez);
  } else {
    const double ez = std::exp(z);
    L = 1.0 / (1.0 + ez);
    M = ez / (1.0 + ez);
  }
  const double z1 = -1.0 / (s * s) - 1.0 / (r * r);
  const double z2 = 2.0 / (s * s * s) - 2.0 / (r * r * r);
  const double lm = L * M;
  return {L, -lm * z1, lm * (1.0 - 2.0 * L) * z1 * z1 - lm * z2};
}

CutoffSpec::CutoffSpec(const CutoffParams& params) : p_(params) {}

double CutoffSpec::phi(double rho, int order) const {
  const double half = p_.R / 2.0;
  const SmoothStep st = smooth_step((rho - half) / half);
  if (order == 0) return 1.0 - st.value;
  if (order == 1) return -st.d1 / half;
  return -st.d2 / (half * half);
}

double CutoffSpec::psi(double t, int order) const {
  const double start = p_.t0 - p_.T;
  const double span = p_.tau - start;
  const SmoothStep st = smooth_step((t - start) / span);
  if (order == 0) return st.value;
  if (order == 1) return st.d1 / span;
  return st.d2 / (span * span);
}

double CutoffSpec::value(double rho, double t) const { return phi(rho, 0) * psi(t, 0); }
double CutoffSpec::d_rho(double rho, double t) const { return phi(rho, 1) * psi(t, 0); }
double CutoffSpec::d_rhorho(double rho, double t) const { return phi(rho, 2) * psi(t, 0); }
double CutoffSpec::d_t(double rho, double t) const { return phi(rho, 0) * psi(t, 1); }

namespace {

void validate(const CutoffParams& p) {
  if (!(p.R > 0.0) || !(p.T > 0.0)) throw Error(ErrorCode::BadWindow, "cutoff needs R > 0 and T > 0");
  if (!(p.tau > p.t0 - p.T) || !(p.tau <= p.t0)) {
    std::ostringstream os;
    os.precision(17);
    os << "tau = " << p.tau << " outside (" << p.t0 - p.T << ", " << p.t0 << "]";
    throw Error(ErrorCode::BadWindow, os.str());
  }
  if (!(p.a > 0.0 && p.a < 1.0)) throw Error(ErrorCode::BadWindow, "smoothing exponent a must lie in (0, 1)");
}

struct Sweep {
  std::vector<double> rho, t;
};

Sweep sweep(const CutoffParams& p, int samples) {
  Sweep s;
  for (int i = 0; i < samples; ++i) {
    s.rho.push_back(1.25 * p.R * i / (samples - 1));
    s.t.push_back(p.t0 - p.T + p.T * i / (samples - 1));
  }
  return s;
}

void measure(CutoffSpec& spec, int samples) {
  const CutoffParams& p = spec.params();
  const Sweep s = sweep(p, samples);
  double c = 0.0, ca = 0.0;
  for (double t : s.t) {
    for (double rho : s.rho) {
      const double e = spec.value(rho, t);
      if (!(e > 0.0)) continue;
      c = std::max(c, std::abs(spec.d_t(rho, t)) / std::sqrt(e) * (p.tau - p.t0 + p.T));
      const double ea = std::pow(e, p.a);
      ca = std::max(ca, p.R * std::abs(spec.d_rho(rho, t)) / ea);
      ca = std::max(ca, p.R * p.R * std::abs(spec.d_rhorho(rho, t)) / ea);
    }
  }
  spec.c = c;
  spec.c_a = ca;
  spec.samples = samples;
}

}  // namespace

CutoffSpec build_cutoff(const CutoffParams& params, int samples) {
  validate(params);
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "cutoff measurement needs >= 2 samples per axis");
  CutoffSpec spec(params);
  measure(spec, samples);
  return spec;
}

CutoffCheck check_cutoff(const CutoffSpec& spec, int samples) {
  const CutoffParams& p = spec.params();
  validate(p);
  CutoffCheck out;
  out.c = spec.c;
  out.c_a = spec.c_a;
  CutoffProperty range{"range_and_support"}, plateau{"plateau_on_half_cylinder"}, flat{"flat_on_half_ball"},
      initial{"vanishes_at_start"}, time_bound{"time_derivative_bound"}, radial{"radial_derivative_bounds"};
  const Sweep s = sweep(p, samples);
  const double tol = 1e-12;
  auto fail = [](CutoffProperty& prop, double amount) {
    prop.worst = std::max(prop.worst, amount);
    prop.holds = false;
  };
  for (double t : s.t) {
    for (double rho : s.rho) {
      const double e = spec.value(rho, t);
      if (e < -tol || e > 1.0 + tol) fail(range, std::max(-e, e - 1.0));
      if (rho >= p.R && std::abs(e) > 0.0) fail(range, std::abs(e));
      if (rho <= p.R / 2.0 && t >= p.tau && std::abs(e - 1.0) > tol) fail(plateau, std::abs(e - 1.0));
      const double dr = spec.d_rho(rho, t);
      if (rho <= p.R / 2.0 && dr != 0.0) fail(flat, std::abs(dr));
      if (t == p.t0 - p.T && e != 0.0) fail(initial, std::abs(e));
      if (e > 0.0) {
        // (iii) and (iv) are existence statements: the realised sups must be finite
        out.c = std::max(out.c, std::abs(spec.d_t(rho, t)) / std::sqrt(e) * (p.tau - p.t0 + p.T));
        const double ea = std::pow(e, p.a);
        out.c_a = std::max(out.c_a, p.R * std::abs(dr) / ea);
        out.c_a = std::max(out.c_a, p.R * p.R * std::abs(spec.d_rhorho(rho, t)) / ea);
        if (dr > tol) fail(radial, dr);
      } else if (std::abs(dr) > tol) {
        fail(radial, std::abs(dr));
      }
    }
  }
  if (!std::isfinite(out.c)) fail(time_bound, out.c);
  if (!std::isfinite(out.c_a)) fail(radial, out.c_a);
  out.properties = {range, plateau, flat, initial, time_bound, radial};
  out.pass = std::all_of(out.properties.begin(), out.properties.end(), [](const CutoffProperty& q) { return q.holds; });
  return out;
}

}  // namespace pmelab
