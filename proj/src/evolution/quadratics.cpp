#include "pmelab/quadratics.hpp"

#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/exponents.hpp"

namespace pmelab {

double gamma_quadratic(double beta, double eps, double p, double m) {
  const double P = p - 1.0;
  const double lead = eps - 2.0 * (1.0 + P * beta) - P;
  return lead * lead + (m - 1.0) * P * P - 2.0 * P * beta * (1.0 + P * (beta + 1.0) - eps);
}

QuadraticOptimum gamma_optimum(double p, double m) {
  if (!(p > 1.0)) throw Error(ErrorCode::ExponentOutOfRange, "optimum needs p > 1");
  const double P = p - 1.0;
  return {-1.0 / P, p, (m - 1.0) * P * P - 1.0};
}

double omega_quadratic(double q, double eps, double s, double p, double m) {
  const double P = p - 1.0;
  const double lead = eps - 2.0 * (q * P + 1.0) - P;
  return lead * lead + P * P * (m - 1.0) - 4.0 * P / s * q * (q * P + p - eps);
}

QuadraticOptimum omega_optimum(double s, double p, double m) {
  if (!(p > 1.0)) throw Error(ErrorCode::ExponentOutOfRange, "optimum needs p > 1");
  if (!(s > 1.0)) throw Error(ErrorCode::InvalidArgument, "optimum needs s > 1");
  const double P = p - 1.0;
  return {-s / (2.0 * (s - 1.0) * P), p, -1.0 / (s - 1.0) + P * P * (m - 1.0)};
}

QuadraticOptimum minimize_2d(const std::function<double(double, double)>& f, double x0, double y0, int iterations) {
  double x = x0, y = y0;
  for (int it = 0; it < iterations; ++it) {
    const double hx = 1e-3 * std::max(1.0, std::abs(x));
    const double hy = 1e-3 * std::max(1.0, std::abs(y));
    const double f0 = f(x, y);
    const double fxp = f(x + hx, y), fxm = f(x - hx, y);
    const double fyp = f(x, y + hy), fym = f(x, y - hy);
    const double gx = (fxp - fxm) / (2.0 * hx);
    const double gy = (fyp - fym) / (2.0 * hy);
    const double hxx = (fxp - 2.0 * f0 + fxm) / (hx * hx);
    const double hyy = (fyp - 2.0 * f0 + fym) / (hy * hy);
    const double hxy = (f(x + hx, y + hy) - f(x + hx, y - hy) - f(x - hx, y + hy) + f(x - hx, y - hy)) / (4.0 * hx * hy);
    const double det = hxx * hyy - hxy * hxy;
    if (!(det > 0.0) || !(hxx > 0.0)) throw Error(ErrorCode::InvalidArgument, "objective is not locally convex");
    const double dx = (hyy * gx - hxy * gy) / det;
    const double dy = (hxx * gy - hxy * gx) / det;
    x -= dx;
    y -= dy;
    if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x)) && std::abs(dy) <= 1e-15 * std::max(1.0, std::abs(y))) break;
  }
  return {x, y, f(x, y)};
}

bool gamma_optimum_negative(double p, double m) { return p > 1.0 && p < second_family_p_limit(m); }

bool omega_optimum_nonpositive(double s, double p, double m) { return p > 1.0 && p <= closed_bound_p_limit(s, m); }

}  // namespace pmelab
