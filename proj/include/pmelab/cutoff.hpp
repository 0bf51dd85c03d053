#pragma once

#include <string>
#include <vector>

namespace pmelab {

struct CutoffParams {
  double R = 1.0;
  double T = 1.0;
  double tau = 1.0;
  double t0 = 1.0;
  double a = 0.75;
};

/// C-infinity step S(s) = 1 / (1 + exp(1/s - 1/(1-s))) on (0, 1), 0 below and 1 above, with derivatives.
struct SmoothStep {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};
SmoothStep smooth_step(double s);

/// eta(rho, t) = phi(rho) psi(t): phi = 1 on [0, R/2], 0 beyond R; psi = 0 at t0 - T, 1 on [tau, t0].
class CutoffSpec {
 public:
  CutoffSpec() = default;
  explicit CutoffSpec(const CutoffParams& params);

  const CutoffParams& params() const { return p_; }
  double value(double rho, double t) const;
  double d_rho(double rho, double t) const;
  double d_rhorho(double rho, double t) const;
  double d_t(double rho, double t) const;

  /// Realised constants from the last measurement.
  double c = 0.0;    // sup |d_t eta| / sqrt(eta) * (tau - t0 + T)
  double c_a = 0.0;  // sup of R |d_rho eta| / eta^a and R^2 |d_rhorho eta| / eta^a
  int samples = 0;

 private:
  CutoffParams p_;
  double phi(double rho, int order) const;
  double psi(double t, int order) const;
};

/// Throws BadWindow when tau is outside (t0 - T, t0]; measures c and c_a on a samples x samples grid.
CutoffSpec build_cutoff(const CutoffParams& params, int samples = 1000);

struct CutoffProperty {
  std::string name;
  bool holds = true;
  double worst = 0.0;
};

struct CutoffCheck {
  std::vector<CutoffProperty> properties;
  double c = 0.0;
  double c_a = 0.0;
  bool pass = false;
};

/// Checks the six profile properties on `samples` points in each of rho in [0, 1.25 R] and t in [t0 - T, t0].
CutoffCheck check_cutoff(const CutoffSpec& spec, int samples = 100);

}  // namespace pmelab
