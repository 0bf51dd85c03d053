#pragma once

#include <string>
#include <vector>

#include "pmelab/grid_field.hpp"
#include "pmelab/metric.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

/// amp * e^{rate t} * (c0 + sum_j a_j sin(k_j . x + phase_j))
struct PressureExpr {
  struct Mode {
    double a = 0.0;
    Vec3 k{1.0, 0.0, 0.0};
    double phase = 0.0;
  };
  std::string tag;
  double amp = 1.0;
  double rate = 0.0;
  double c0 = 1.0;
  std::vector<Mode> modes;

  double value(const Vec3& x, double t) const;
  double dt(const Vec3& x, double t) const;
  Vec3 grad(const Vec3& x, double t) const;
  Mat3 hess(const Vec3& x, double t) const;
  /// Lower bound of the value over all x at time t.
  double lower_bound(double t) const;
  bool spatially_constant() const;
};

/// constant | exp-growth | decaying-sine | static-sine | unit-sine | cosine-static | sine-2d
PressureExpr pressure_catalog(const std::string& tag);
std::vector<std::string> pressure_catalog_tags();

struct Manufactured {
  ScalarField v;
  ScalarField u;
  ScalarField v_t;               // closed form
  ScalarField sigma;             // closed form at the nodes
  ScalarField sigma_grid;        // v_t - (p-1) v Delta_f v - |grad v|^2 with grid operators
  std::vector<Vec3> sigma_x;     // grid gradient of sigma
  double sigma_v = 0.0;          // manufactured convention
};

/// Sigma := v_t - (p-1) v Delta_f v - |grad v|^2 evaluated from closed-form derivatives at one point.
double manufactured_sigma(const GeometryContext& ctx, const PressureExpr& expr, double p, const Vec3& x, double t);

/// Samples v at time t and builds u and Sigma; throws NonPositiveV if v <= 0 at a node.
Manufactured manufacture(const GeometryContext& ctx, const PressureExpr& expr, double p, double t);
Manufactured manufacture(const GeometryContext& ctx, const GridGeometry& geo, const PressureExpr& expr, double p,
                         double t);

}  // namespace pmelab
