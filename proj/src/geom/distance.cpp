#include "pmelab/distance.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

namespace {

double euclid(const ModelDistance& d, const Vec3& x) {
  double s = 0.0;
  for (int i = 0; i < d.n; ++i) {
    double dx = x[i] - d.x0[i];
    if (d.period[i] > 0.0) {
      dx = std::fmod(dx, d.period[i]);
      if (dx > 0.5 * d.period[i]) dx -= d.period[i];
      if (dx < -0.5 * d.period[i]) dx += d.period[i];
    }
    s += dx * dx;
  }
  return std::sqrt(s);
}

}  // namespace

std::pair<double, double> ModelDistance::operator()(const Vec3& x, double t) const {
  switch (model) {
    case DistanceModel::Flat:
      return {std::sqrt(scale) * euclid(*this, x), 0.0};
    case DistanceModel::ConformalFlat: {
      const double rho = std::exp(rate * t) * euclid(*this, x);
      return {rho, rate * rho};
    }
    case DistanceModel::RoundSphere: {
      const double c = std::cos(x[0]) * std::cos(x0[0]) + std::sin(x[0]) * std::sin(x0[0]) * std::cos(x[1] - x0[1]);
      return {radius * std::acos(std::clamp(c, -1.0, 1.0)), 0.0};
    }
    case DistanceModel::Hyperbolic: {
      const double dx = x[0] - x0[0], dy = x[1] - x0[1];
      const double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * x[1] * x0[1]);
      return {std::acosh(std::max(1.0, arg)), 0.0};
    }
  }
  return {0.0, 0.0};
}

std::pair<double, double> model_distance(const ModelDistance& model, const Vec3& x, double t) { return model(x, t); }

ModelDistance model_distance_for(const GeometryContext& ctx, const Vec3& x0) {
  ModelDistance d;
  d.n = ctx.n();
  d.x0 = x0;
  for (int i = 0; i < d.n; ++i) {
    const Axis& ax = ctx.chart().axis(i);
    if (ax.topology == Topology::Periodic) d.period[i] = ax.length();
  }
  const MetricField& g = ctx.metric();
  switch (g.kind()) {
    case MetricKind::Flat:
      d.model = DistanceModel::Flat;
      break;
    case MetricKind::Scaled:
      d.model = DistanceModel::Flat;
      d.scale = g.scale;
      break;
    case MetricKind::ConformalTime:
      d.model = DistanceModel::ConformalFlat;
      d.rate = g.rate;
      break;
    case MetricKind::RoundSphere:
      d.model = DistanceModel::RoundSphere;
      d.radius = g.radius;
      d.period = Vec3{0.0, 0.0, 0.0};
      break;
    case MetricKind::Hyperbolic:
      d.model = DistanceModel::Hyperbolic;
      d.period = Vec3{0.0, 0.0, 0.0};
      break;
    default:
      throw Error(ErrorCode::UnsupportedModel, "no closed-form distance for metric '" + g.name() + "'");
  }
  return d;
}

}  // namespace pmelab
