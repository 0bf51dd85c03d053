#pragma once

#include <vector>

#include "pmelab/curvature.hpp"
#include "pmelab/grid_field.hpp"

namespace pmelab {

/// Pointwise geometry sampled at every node of a chart at one time.
struct GridGeometry {
  Chart chart;
  int n = 0;
  double t = 0.0;
  double m = 0.0;
  std::vector<Mat3> g, ginv, dtg;
  std::vector<Christoffel> gamma;
  std::vector<Vec3> drift;  // b^j of the f-Laplacian
  std::vector<Vec3> df;     // d_i f
  std::vector<Mat3> ric_f;  // m = infinity
  std::vector<Mat3> ric_fm;
  std::vector<double> f;
  std::vector<double> density;  // e^{-f} sqrt|g|
  bool diagonal = true;

  static GridGeometry build(const GeometryContext& ctx, double t);
  /// Same nodes, Bakry-Emery tensor for another m.
  void set_m(const GeometryContext& ctx, double m);
};

/// Coordinate partial along one axis, 4th order.
std::vector<double> partial(const Chart& chart, const std::vector<double>& w, int axis);
std::vector<double> second_partial(const Chart& chart, const std::vector<double>& w, int axis);

struct GradientField {
  std::vector<Vec3> covector;  // d_i w
  std::vector<Vec3> vector;    // g^{ij} d_j w
  ScalarField norm2;           // |grad w|^2_g
};

struct HessianField {
  std::vector<Mat3> h;  // d_i d_j w - Gamma^k_ij d_k w
  ScalarField norm2;    // g^{ik} g^{jl} h_ij h_kl
};

GradientField gradient(const GridGeometry& geo, const ScalarField& w);
GradientField gradient(const GeometryContext& ctx, const ScalarField& w);
ScalarField f_laplacian(const GridGeometry& geo, const ScalarField& w);
ScalarField f_laplacian(const GeometryContext& ctx, const ScalarField& w);
HessianField hessian(const GridGeometry& geo, const ScalarField& w);
HessianField hessian(const GeometryContext& ctx, const ScalarField& w);

/// g^{ij} a_i b_j for two covector fields.
ScalarField inner(const GridGeometry& geo, const std::vector<Vec3>& a, const std::vector<Vec3>& b);
/// T(X, X) for a tensor field and a vector field.
ScalarField pairing(const GridGeometry& geo, const std::vector<Mat3>& tensor, const std::vector<Vec3>& x);

struct BochnerResult {
  ScalarField residual;  // identity with Ric_f (m = infinity)
  ScalarField slack;     // m-inequality
  ScalarField scale;     // max(|lhs|, |rhs|, 1) per node
};
BochnerResult bochner_residual(const GridGeometry& geo, const ScalarField& w);
BochnerResult bochner_residual(const GeometryContext& ctx, const ScalarField& w);

/// |Hess v|^2 + <df, dv>^2/(m-n) - (Delta_f v)^2/m, per node.
ScalarField cauchy_schwarz_slack(const GridGeometry& geo, const ScalarField& v);

/// Ricci tensor rebuilt from metric samples on the grid with stencil derivatives.
std::vector<Mat3> ricci_on_grid(const GeometryContext& ctx, double t);

}  // namespace pmelab
