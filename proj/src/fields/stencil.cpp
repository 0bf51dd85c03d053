#include "pmelab/stencil.hpp"

namespace pmelab {

namespace {

inline int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

double stencil_d1(const double* line, std::ptrdiff_t stride, int i, int n, double h, bool periodic) {
  auto at = [&](int j) { return line[static_cast<std::ptrdiff_t>(j) * stride]; };
  if (periodic) {
    return (8.0 * (at(wrap(i + 1, n)) - at(wrap(i - 1, n))) - (at(wrap(i + 2, n)) - at(wrap(i - 2, n)))) /
           (12.0 * h);
  }
  if (i >= 2 && i <= n - 3)
    return (8.0 * (at(i + 1) - at(i - 1)) - (at(i + 2) - at(i - 2))) / (12.0 * h);
  if (i == 0)
    return (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) - 3.0 * at(4)) / (12.0 * h);
  if (i == 1)
    return (-3.0 * at(0) - 10.0 * at(1) + 18.0 * at(2) - 6.0 * at(3) + at(4)) / (12.0 * h);
  if (i == n - 1)
    return (25.0 * at(n - 1) - 48.0 * at(n - 2) + 36.0 * at(n - 3) - 16.0 * at(n - 4) + 3.0 * at(n - 5)) /
           (12.0 * h);
  return (3.0 * at(n - 1) + 10.0 * at(n - 2) - 18.0 * at(n - 3) + 6.0 * at(n - 4) - at(n - 5)) / (12.0 * h);
}

double stencil_d2(const double* line, std::ptrdiff_t stride, int i, int n, double h, bool periodic) {
  auto at = [&](int j) { return line[static_cast<std::ptrdiff_t>(j) * stride]; };
  const double h2 = 12.0 * h * h;
  if (periodic) {
    return (16.0 * (at(wrap(i - 1, n)) + at(wrap(i + 1, n))) - (at(wrap(i - 2, n)) + at(wrap(i + 2, n))) -
            30.0 * at(i)) /
           h2;
  }
  if (i >= 2 && i <= n - 3)
    return (16.0 * (at(i - 1) + at(i + 1)) - (at(i - 2) + at(i + 2)) - 30.0 * at(i)) / h2;
  if (i == 0)
    return (45.0 * at(0) - 154.0 * at(1) + 214.0 * at(2) - 156.0 * at(3) + 61.0 * at(4) - 10.0 * at(5)) / h2;
  if (i == 1)
    return (10.0 * at(0) - 15.0 * at(1) - 4.0 * at(2) + 14.0 * at(3) - 6.0 * at(4) + at(5)) / h2;
  if (i == n - 1)
    return (45.0 * at(n - 1) - 154.0 * at(n - 2) + 214.0 * at(n - 3) - 156.0 * at(n - 4) + 61.0 * at(n - 5) -
            10.0 * at(n - 6)) /
           h2;
  return (10.0 * at(n - 1) - 15.0 * at(n - 2) - 4.0 * at(n - 3) + 14.0 * at(n - 4) - 6.0 * at(n - 5) +
          at(n - 6)) /
         h2;
}

}  // namespace pmelab
