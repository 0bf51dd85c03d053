#pragma once

#include <utility>

#include "pmelab/metric.hpp"

namespace pmelab {

enum class DistanceModel { Flat, ConformalFlat, RoundSphere, Hyperbolic };

/// Closed-form geodesic distance from a base point for the supported model metrics.
struct ModelDistance {
  DistanceModel model = DistanceModel::Flat;
  int n = 1;
  Vec3 x0{0.0, 0.0, 0.0};
  double scale = 1.0;   // flat: g = scale * delta
  double rate = 0.0;    // conformal: g = exp(2 rate t) delta
  double radius = 1.0;  // sphere
  /// Period per axis for torus wrap-around, 0 when the axis is not periodic.
  Vec3 period{0.0, 0.0, 0.0};

  /// (rho, d_t rho)
  std::pair<double, double> operator()(const Vec3& x, double t) const;
};

/// Deduces the model from the metric kind; throws UnsupportedModel otherwise.
ModelDistance model_distance_for(const GeometryContext& ctx, const Vec3& x0);
std::pair<double, double> model_distance(const ModelDistance& model, const Vec3& x, double t);

}  // namespace pmelab
