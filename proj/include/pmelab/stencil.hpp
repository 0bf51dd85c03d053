#pragma once

#include <cstddef>

namespace pmelab {

/// Fourth-order first derivative at index i of a strided line of n samples.
/// Periodic lines wrap; bounded lines switch to one-sided stencils near the ends.
double stencil_d1(const double* line, std::ptrdiff_t stride, int i, int n, double h, bool periodic);

/// Fourth-order second derivative, same conventions.
double stencil_d2(const double* line, std::ptrdiff_t stride, int i, int n, double h, bool periodic);

/// Fourth-order central difference of a scalar function of one variable.
template <class F>
double central_d1(F&& f, double x, double h) {
  return (f(x - 2 * h) - 8.0 * f(x - h) + 8.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h);
}

template <class F>
double central_d2(F&& f, double x, double h) {
  return (-f(x - 2 * h) + 16.0 * f(x - h) - 30.0 * f(x) + 16.0 * f(x + h) - f(x + 2 * h)) / (12.0 * h * h);
}

}  // namespace pmelab
