#pragma once

namespace pmelab {

struct BetaRange {
  double beta1 = 0.0;
  double beta2 = 0.0;
  double midpoint = 0.0;  // -(2-p) / (2(p-1))
};

/// Upper end of the open p-interval for the first estimate family: 1 + 1/(sqrt(2m) + 1).
double first_family_p_limit(double m);
/// 1 + 1/sqrt(m-1); infinite for m <= 1.
double second_family_p_limit(double m);
/// 1 + 1/sqrt((s-1)(m-1)) for the closed-manifold bounds.
double closed_bound_p_limit(double s, double m);

/// Roots of beta^2 + (2-p)/(p-1) beta + m/2 = 0; throws ExponentOutOfRange outside the open p-interval.
BetaRange beta_admissible_range(double p, double m);
bool beta_admissible(double p, double m, double beta);

}  // namespace pmelab
