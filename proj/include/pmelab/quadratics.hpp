#pragma once

#include <functional>

namespace pmelab {

/// [eps - 2(1 + (p-1) beta) - (p-1)]^2 + (m-1)(p-1)^2 - 2(p-1) beta [1 + (p-1)(beta+1) - eps]
double gamma_quadratic(double beta, double eps, double p, double m);

struct QuadraticOptimum {
  double x = 0.0;    // beta or q
  double eps = 0.0;
  double value = 0.0;
};

/// beta* = -1/(p-1), eps* = p, value (m-1)(p-1)^2 - 1
QuadraticOptimum gamma_optimum(double p, double m);

/// {eps - 2[q(p-1)+1] - (p-1)}^2 + (p-1)^2 (m-1) - (4(p-1)/s) q [q(p-1) + p - eps]
double omega_quadratic(double q, double eps, double s, double p, double m);

/// q* = -s/(2(s-1)(p-1)), eps* = p, value -1/(s-1) + (p-1)^2 (m-1)
QuadraticOptimum omega_optimum(double s, double p, double m);

/// Newton iteration on a smooth function of two variables with difference-quotient derivatives.
QuadraticOptimum minimize_2d(const std::function<double(double, double)>& f, double x0, double y0, int iterations = 20);

/// Gamma* < 0, i.e. p < 1 + 1/sqrt(m-1).
bool gamma_optimum_negative(double p, double m);
/// Omega* <= 0, i.e. p <= 1 + 1/sqrt((s-1)(m-1)).
bool omega_optimum_nonpositive(double s, double p, double m);

}  // namespace pmelab
