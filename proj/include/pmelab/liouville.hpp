#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pmelab/nonlinearity.hpp"

namespace pmelab {

/// Ancient-solution statements attached to the two estimate families.
enum class LiouvilleTheorem { BetaAncient, OptimalAncient };
std::string liouville_tag(LiouvilleTheorem th);
LiouvilleTheorem parse_liouville(const std::string& tag);

/// 2/[(p-1)(2-beta)] or 2/(2p-1): admissible growth exponent of u.
double u_growth_exponent(LiouvilleTheorem th, double p, double beta);
/// 1/(1-beta/2) or (p-1)/(p-1/2): the matching exponent for M = sup v.
double v_growth_exponent(LiouvilleTheorem th, double p, double beta);

/// Log-uniform positive samples on [lo, hi].
std::vector<double> log_uniform_samples(double lo = 1e-6, double hi = 1e6, int count = 1000);

struct SignReport {
  double min_expression = 0.0;  // [2(2-p)+beta(p-1)] N - 2 u N_u, or (3-2p) N - 2 u N_u
  double argmin_u = 0.0;
  bool holds = false;           // min >= -1e-12 relative to the term sizes
  double equivalence_error = 0.0;  // max relative mismatch of 2 Sigma_v - beta Sigma / v and its u-form
  bool equivalence_ok = false;
  double min_n = 0.0;  // smallest N on the samples
  int samples = 0;
};
/// beta is ignored for the optimal family, which uses -1/(p-1).
SignReport check_sign_hypothesis(LiouvilleTheorem th, const NonlinearitySpec& spec, double p, double beta,
                                 const std::vector<double>& u_samples);

struct OdeResult {
  std::vector<std::pair<double, double>> trajectory;  // (t, u)
  std::optional<double> violation_time;              // first t with u = 0
  long steps = 0;
  long rejected = 0;
};
/// du/dt = N(t, 0, u) from u(0) = u0 to t_end (either sign) by adaptive Dormand-Prince;
/// the zero crossing is located by bisection on the step length. Throws StiffBlowup on step collapse.
OdeResult integrate_ode(const NonlinearitySpec& spec, double u0, double t_end, double rtol = 1e-12,
                        double atol = 1e-14);
OdeResult ancient_ode(const NonlinearitySpec& spec, double u0, double t_back);

struct GrowthRung {
  double R = 0.0;
  double M = 0.0;
  double quotient = 0.0;  // M R^{-exponent}
  double limit_gradient = 0.0;  // M^{1-beta/2}/R or M^{1+1/(2(p-1))}/R
  double limit_time = 0.0;      // M^{(1-beta)/2}/R or M^{p/(2(p-1))}/R with T = R^2
};

struct GrowthReport {
  double exponent = 0.0;
  std::vector<GrowthRung> rungs;
  double slope = 0.0;  // least-squares slope of log quotient against log R
  bool pass = false;   // slope <= -0.05 and the last quotient below the first
};
/// Throws InsufficientLadder with fewer than three R values.
GrowthReport growth_gate(LiouvilleTheorem th, double p, double beta, std::vector<std::pair<double, double>> ladder);

struct LiouvilleCase {
  LiouvilleTheorem theorem = LiouvilleTheorem::BetaAncient;
  double p = 1.2;
  double m = 2.0;
  double beta = 0.0;
  NonlinearitySpec spec = NonlinearitySpec::constant(1.0);
  double u0 = 1.0;
  double t_back = -10.0;
  std::optional<double> a;  // required lower bound of N; defaults to the sampled minimum
  std::vector<std::pair<double, double>> ladder;  // optional (R, M) pairs
  std::vector<double> u_samples = log_uniform_samples();
};

struct LiouvilleVerdict {
  bool exponents_ok = false;
  std::string exponent_message;
  SignReport sign;
  bool positivity_ok = false;  // N >= a > 0 on the samples
  double a = 0.0;
  OdeResult ode;
  std::optional<double> bound_time;  // -u0/a
  bool bound_consistent = true;      // violation time >= -u0/a
  std::optional<GrowthReport> growth;
  std::string verdict;  // no-ancient-solution | hypotheses-not-met | inconclusive
};

LiouvilleVerdict liouville_verdict(const LiouvilleCase& c);

}  // namespace pmelab
