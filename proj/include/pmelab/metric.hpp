#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "pmelab/chart.hpp"
#include "pmelab/linalg.hpp"

namespace pmelab {

using MetricGrad = std::array<Mat3, 3>;                  // [k] = d_k g_ij
using MetricHess = std::array<std::array<Mat3, 3>, 3>;  // [k][l] = d_k d_l g_ij

/// Scalar evaluator of (x, t) with optional closed-form derivatives.
struct ScalarFunction {
  std::string name;
  std::function<double(const Vec3&, double)> value;
  std::function<Vec3(const Vec3&, double)> grad;
  std::function<Mat3(const Vec3&, double)> hess;
  std::function<double(const Vec3&, double)> time_derivative;
  bool spatially_constant = false;
  bool time_dependent = false;

  double operator()(const Vec3& x, double t) const { return value(x, t); }
  /// Coordinate gradient; falls back to 4th-order differences.
  Vec3 gradient(int n, const Vec3& x, double t, double h = 1e-3) const;
  Mat3 hessian(int n, const Vec3& x, double t, double h = 1e-3) const;
  double dt(const Vec3& x, double t) const;
};

ScalarFunction zero_function();
ScalarFunction constant_function(double c);
/// f = a . x
ScalarFunction linear_function(const Vec3& a);
/// f = c |x|^2 / 2
ScalarFunction quadratic_function(double c);
/// f = amp sin(k x_axis)
ScalarFunction sine_function(double amp, int axis, double k = 1.0);
/// f = amp sin(k x_0) sin(k x_1)
ScalarFunction sine_product_function(double amp, double k = 1.0);

enum class MetricKind { Flat, Scaled, ConformalTime, ConformalSpace, RoundSphere, Hyperbolic, Sampled, Custom };
enum class MetricSource { Analytic, SampledGrid };

class MetricField {
 public:
  using MatFn = std::function<Mat3(const Vec3&, double)>;
  using GradFn = std::function<MetricGrad(const Vec3&, double)>;
  using HessFn = std::function<MetricHess(const Vec3&, double)>;

  MetricField() = default;
  MetricField(int n, std::string name, MetricKind kind, MatFn g, MatFn dt, bool time_dependent,
              GradFn dg = {}, HessFn d2g = {});

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  MetricKind kind() const { return kind_; }
  MetricSource source() const { return source_; }
  bool time_dependent() const { return time_dependent_; }
  bool has_analytic_derivatives() const { return static_cast<bool>(dg_) && static_cast<bool>(d2g_); }

  Mat3 g(const Vec3& x, double t) const;
  Mat3 dt(const Vec3& x, double t) const;
  MetricGrad dg(const Vec3& x, double t) const;
  MetricHess d2g(const Vec3& x, double t) const;

  /// Model parameters used by the distance models.
  double scale = 1.0;   // Scaled: g = scale * delta
  double rate = 0.0;    // ConformalTime: g = exp(2 rate t) delta
  double radius = 1.0;  // RoundSphere
  double fd_step = 1e-3;

  static MetricField flat(int n);
  static MetricField scaled_flat(int n, double c);
  static MetricField conformal_time(int n, double a);
  /// g = exp(2 psi(x)) delta with psi supplied with gradient and Hessian.
  static MetricField conformal_space(int n, const ScalarFunction& psi, const std::string& name);
  /// Round sphere of radius r in (theta, phi) coordinates.
  static MetricField round_sphere(double r = 1.0);
  /// Upper half plane, axis 1 is y > 0.
  static MetricField hyperbolic_half_plane();
  /// Static metric known only at the chart nodes; derivatives by grid stencils.
  static MetricField sampled(const Chart& chart, std::vector<Mat3> values, const std::string& name);

 private:
  int n_ = 0;
  std::string name_;
  MetricKind kind_ = MetricKind::Custom;
  MetricSource source_ = MetricSource::Analytic;
  MatFn g_;
  MatFn dt_;
  bool time_dependent_ = false;
  GradFn dg_;
  HessFn d2g_;
};

inline constexpr double kInfiniteM = std::numeric_limits<double>::infinity();

/// (M, g, f) on a chart together with the synthetic dimension m.
class GeometryContext {
 public:
  GeometryContext(Chart chart, MetricField metric, ScalarFunction potential, double m);

  int n() const { return chart_.dim(); }
  const Chart& chart() const { return chart_; }
  const MetricField& metric() const { return metric_; }
  const ScalarFunction& potential() const { return potential_; }
  double m() const { return m_; }
  bool m_infinite() const { return m_ == kInfiniteM; }
  bool is_static() const { return !metric_.time_dependent() && !potential_.time_dependent; }
  /// Whether f is spatially constant (flag or sampled check).
  bool potential_constant() const { return potential_constant_; }

  /// e^{-f} sqrt|g|
  double density(const Vec3& x, double t) const;
  /// Same geometry on a different grid.
  GeometryContext with_chart(const Chart& chart) const;
  GeometryContext with_m(double m) const;

 private:
  Chart chart_;
  MetricField metric_;
  ScalarFunction potential_;
  double m_;
  bool potential_constant_ = false;
};

}  // namespace pmelab
