#include "pmelab/pressure.hpp"

#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

namespace {

void require_exponent(double p) {
  if (!(p > 1.0)) throw Error(ErrorCode::ExponentOutOfRange, "pressure transform needs p > 1");
}

}  // namespace

double pressure_of(double u, double p) {
  require_exponent(p);
  if (!(u > 0.0)) throw Error(ErrorCode::NonPositiveInput, "u must be positive");
  return p * std::pow(u, p - 1.0) / (p - 1.0);
}

double density_of(double v, double p) {
  require_exponent(p);
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveInput, "v must be positive");
  return std::pow((p - 1.0) * v / p, 1.0 / (p - 1.0));
}

ScalarField pressure_transform(const ScalarField& u, double p) {
  return map_field(u, [p](double x) { return pressure_of(x, p); });
}

SpaceTimeField pressure_transform(const SpaceTimeField& u, double p) {
  return u.map([p](double x) { return pressure_of(x, p); });
}

ScalarField inverse_pressure_transform(const ScalarField& v, double p) {
  return map_field(v, [p](double x) { return density_of(x, p); });
}

SigmaValues sigma_from_nonlinearity(const NonlinearitySpec& spec, double p, double t, const Vec3& x, double v) {
  const double u = density_of(v, p);
  SigmaValues s;
  if (spec.is_zero()) return s;
  const double n = spec.value(t, x, u);
  const double coef = p * std::pow(u, p - 2.0);
  s.sigma = coef * n;
  s.sigma_v = (p - 2.0) * n / u + spec.du(t, x, u);
  const Vec3 dx = spec.dx(t, x, u);
  for (int i = 0; i < 3; ++i) s.sigma_x[i] = coef * dx[i];
  return s;
}

SigmaFields sigma_fields(const NonlinearitySpec& spec, double p, const ScalarField& v) {
  const Chart& chart = v.chart();
  SigmaFields out{ScalarField(chart, v.time()), ScalarField(chart, v.time()), std::vector<Vec3>(v.size())};
  for (std::size_t q = 0; q < v.size(); ++q) {
    const SigmaValues s = sigma_from_nonlinearity(spec, p, v.time(), chart.point(q), v[q]);
    out.sigma[q] = s.sigma;
    out.sigma_v[q] = s.sigma_v;
    out.sigma_x[q] = s.sigma_x;
  }
  return out;
}

}  // namespace pmelab
