#include "pmelab/exponents.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pmelab/error.hpp"

namespace pmelab {

double first_family_p_limit(double m) { return 1.0 + 1.0 / (std::sqrt(2.0 * m) + 1.0); }

double second_family_p_limit(double m) {
  if (m <= 1.0) return std::numeric_limits<double>::infinity();
  return 1.0 + 1.0 / std::sqrt(m - 1.0);
}

double closed_bound_p_limit(double s, double m) {
  const double d = (s - 1.0) * (m - 1.0);
  if (d <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + 1.0 / std::sqrt(d);
}

BetaRange beta_admissible_range(double p, double m) {
  if (!std::isfinite(m)) throw Error(ErrorCode::ExponentOutOfRange, "beta interval needs finite m");
  const double lim = first_family_p_limit(m);
  const double b = (2.0 - p) / (p - 1.0);
  const double c = m / 2.0;
  const double disc = b * b - 4.0 * c;
  if (!(p > 1.0) || !(p < lim) || !(disc > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "p = " << p << " outside (1, " << lim << ") for m = " << m;
    throw Error(ErrorCode::ExponentOutOfRange, os.str());
  }
  // b > 0 here, so -(b + sqrt(disc))/2 carries no cancellation.
  const double q = -0.5 * (b + std::sqrt(disc));
  BetaRange r;
  r.beta1 = q;
  r.beta2 = c / q;
  r.midpoint = -b / 2.0;
  return r;
}

bool beta_admissible(double p, double m, double beta) {
  try {
    const BetaRange r = beta_admissible_range(p, m);
    return beta > r.beta1 && beta < r.beta2;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace pmelab
