#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pmelab/grid_field.hpp"
#include "pmelab/metric.hpp"
#include "pmelab/nonlinearity.hpp"

namespace pmelab {

/// Auxiliary function Gamma(v) added to the gradient functional.
class GammaAux {
 public:
  enum class Kind { Zero, Linear, Power, Tabulated };

  static GammaAux zero();
  static GammaAux linear();
  /// (p-1) v^{p/(p-1)} / p^2
  static GammaAux power(double p);
  /// Natural cubic spline through (v_i, Gamma_i); linear beyond the ends.
  static GammaAux tabulated(std::vector<double> v, std::vector<double> values);

  Kind kind() const { return kind_; }
  std::string tag() const;
  double value(double v) const;
  double d1(double v) const;
  double d2(double v) const;

 private:
  Kind kind_ = Kind::Zero;
  double p_ = 2.0;
  std::vector<double> xs_, ys_, m_;  // m_: second derivatives at the knots
};

/// Time weight zeta(t).
struct Zeta {
  enum class Kind { One, Exponential, Decay };
  Kind kind = Kind::One;
  double s = 2.0;
  double kappa = 0.0;
  double a = 0.0;

  static Zeta one() { return {}; }
  /// e^{-s (kappa + a) t}
  static Zeta exponential(double s, double kappa, double a) { return {Kind::Exponential, s, kappa, a}; }
  /// t / (1 + 2 kappa t)
  static Zeta decay(double kappa) { return {Kind::Decay, 2.0, kappa, 0.0}; }

  std::string tag() const;
  double value(double t) const;
  double derivative(double t) const;
};

/// The two closed-manifold bounds: the general (s, a, Gamma) one and the t/(1+2 kappa t) one.
enum class ClosedBound { General, Decay };
std::string closed_bound_tag(ClosedBound b);
ClosedBound parse_closed_bound(const std::string& tag);

struct CorollaryParams {
  double p = 1.5;
  double s = 2.0;
  double a = 0.0;
  double kappa = 0.0;
  GammaAux gamma = GammaAux::zero();
  double tol = 1e-6;
};

struct HypothesisCheck {
  std::string name;
  double worst = -std::numeric_limits<double>::infinity();  // <= 0 when the condition holds
  bool holds = true;
  double t = 0.0;
  Vec3 x{0.0, 0.0, 0.0};
};

struct CorollaryReport {
  ClosedBound bound = ClosedBound::Decay;
  std::vector<HypothesisCheck> hypotheses;
  std::vector<double> times;
  std::vector<ScalarField> slack;
  std::vector<double> min_slack_per_time;
  double min_slack = 0.0;
  double min_scaled_slack = 0.0;  // slack / max(|lhs|, |rhs|, 1)
  double worst_t = 0.0;
  Vec3 worst_x{0.0, 0.0, 0.0};
  bool pass = false;
};

/// Checks the hypotheses (throws HypothesisViolated naming the failed one) and evaluates the bound's slack
/// at every stored time; time is measured from the first stored frame.
CorollaryReport corollary_bound_check(ClosedBound bound, const GeometryContext& ctx, const SpaceTimeField& u,
                                      const NonlinearitySpec& spec, const CorollaryParams& params);

}  // namespace pmelab
