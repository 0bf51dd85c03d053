#pragma once

#include <iosfwd>
#include <vector>

#include "pmelab/metric.hpp"

namespace pmelab {

/// Gamma^k_ij stored as [k](i, j), symmetric in (i, j).
struct Christoffel {
  std::array<Mat3, 3> c{};
  const Mat3& operator[](int k) const { return c[k]; }
  Mat3& operator[](int k) { return c[k]; }
};

Christoffel christoffel(const GeometryContext& ctx, const Vec3& x, double t);
Mat3 ricci(const GeometryContext& ctx, const Vec3& x, double t);
/// d_i d_j f - Gamma^k_ij d_k f
Mat3 hessian_of_potential(const GeometryContext& ctx, const Vec3& x, double t);
/// Ric + Hess f - df (x) df / (m - n), with the last term dropped for m = infinity.
Mat3 bakry_emery_ricci(const GeometryContext& ctx, const Vec3& x, double t);
Mat3 bakry_emery_ricci(const GeometryContext& ctx, const Vec3& x, double t, double m);

/// Pieces that share the metric derivatives at one point.
struct PointCurvature {
  Mat3 g, ginv, dtg;
  Christoffel gamma;
  Mat3 ric;
  Mat3 hess_f;
  Vec3 df;
  double f = 0.0;
  Mat3 ric_f;   // m = infinity
  Mat3 ric_fm;  // context m
};
PointCurvature point_curvature(const GeometryContext& ctx, const Vec3& x, double t);

struct LaplacianCoeffs {
  Mat3 a;  // g^{ij}
  Vec3 b;  // drift
};
/// Delta_f w = a^{ij} d_i d_j w + b^j d_j w
LaplacianCoeffs f_laplacian_coeffs(const GeometryContext& ctx, const Vec3& x, double t);

struct SpaceTimeBox {
  Vec3 lo{0.0, 0.0, 0.0};
  Vec3 hi{0.0, 0.0, 0.0};
  int samples_per_axis = 16;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int time_samples = 1;
};

struct CurvatureSample {
  Vec3 x;
  double t;
  Mat3 ric;
  Mat3 hess_f;
  Mat3 ric_fm;
  double lambda_min;     // of Ric_f^m relative to g
  double lambda_dt_min;  // of d_t g relative to g
};

struct CurvatureReport {
  int n = 0;
  double m = 0.0;
  std::vector<CurvatureSample> samples;
  double lambda_min = 0.0;
  double lambda_dt_min = 0.0;
  double k = 0.0;  // Ric_f^m >= -(m-1) k g
  double h = 0.0;  // d_t g >= -2 h g
  SpaceTimeBox region;
};

/// Box spanning the whole chart (bounded axes keep their interior) over [t_lo, t_hi].
SpaceTimeBox chart_region(const Chart& chart, double t_lo, double t_hi, int samples_per_axis, int time_samples);
CurvatureReport certify_lower_bounds(const GeometryContext& ctx, const SpaceTimeBox& region);
/// Columns x1..xn, t, lambda_min, k_local, h_local.
void write_curvature_csv(const CurvatureReport& report, std::ostream& os);

}  // namespace pmelab
