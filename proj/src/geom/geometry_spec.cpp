#include "pmelab/geometry_spec.hpp"

#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

Chart GeometrySpec::build_chart(int res) const {
  if (metric == "round-sphere") {
    if (n != 2) throw Error(ErrorCode::InvalidArgument, "round-sphere needs n = 2");
    return Chart({Axis{theta_min, M_PI - theta_min, Topology::Bounded, res}, Axis{0.0, 2.0 * M_PI, Topology::Periodic, res}});
  }
  if (chart == "torus") return torus_chart(n, res);
  if (chart == "box") {
    if (static_cast<int>(lo.size()) != n || static_cast<int>(hi.size()) != n)
      throw Error(ErrorCode::InvalidArgument, "box chart needs n lower and upper extents");
    Topology top;
    if (topology == "periodic")
      top = Topology::Periodic;
    else if (topology == "bounded")
      top = Topology::Bounded;
    else
      throw Error(ErrorCode::UnknownCase, "unknown topology '" + topology + "'");
    return box_chart(lo, hi, res, top);
  }
  throw Error(ErrorCode::UnknownCase, "unknown chart '" + chart + "'");
}

MetricField GeometrySpec::build_metric() const {
  if (metric == "flat") return MetricField::flat(n);
  if (metric == "scaled") return MetricField::scaled_flat(n, metric_scale);
  if (metric == "conformal-time") return MetricField::conformal_time(n, metric_rate);
  if (metric == "conformal-space") return MetricField::conformal_space(n, sine_function(metric_amp, 0, 1.0), "conformal-space");
  if (metric == "round-sphere") return MetricField::round_sphere(radius);
  if (metric == "hyperbolic") {
    if (n != 2) throw Error(ErrorCode::InvalidArgument, "hyperbolic needs n = 2");
    return MetricField::hyperbolic_half_plane();
  }
  throw Error(ErrorCode::UnknownCase, "unknown metric '" + metric + "'");
}

ScalarFunction GeometrySpec::build_potential() const {
  if (potential == "zero") return zero_function();
  if (potential == "constant") return constant_function(potential_amp);
  if (potential == "linear") {
    Vec3 a{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < potential_vector.size() && i < 3; ++i) a[i] = potential_vector[i];
    return linear_function(a);
  }
  if (potential == "quadratic") return quadratic_function(potential_amp);
  if (potential == "sine") return sine_function(potential_amp, potential_axis, potential_k);
  if (potential == "sine-product") return sine_product_function(potential_amp, potential_k);
  throw Error(ErrorCode::UnknownCase, "unknown potential '" + potential + "'");
}

GeometryContext GeometrySpec::build(int res) const {
  const Chart c = build_chart(res);
  // f must be periodic wherever the chart wraps
  auto wraps = [&](int axis) { return axis < c.dim() && c.axis(axis).topology == Topology::Periodic; };
  auto whole_periods = [&](int axis, double k) {
    const double turns = k * c.axis(axis).length() / (2.0 * M_PI);
    return std::abs(turns - std::round(turns)) < 1e-9;
  };
  bool periodic = true;
  if (potential == "quadratic") {
    for (int i = 0; i < c.dim(); ++i) periodic = periodic && !(wraps(i) && potential_amp != 0.0);
  } else if (potential == "linear") {
    for (int i = 0; i < c.dim() && i < static_cast<int>(potential_vector.size()); ++i)
      periodic = periodic && !(wraps(i) && potential_vector[i] != 0.0);
  } else if (potential == "sine") {
    periodic = !wraps(potential_axis) || whole_periods(potential_axis, potential_k);
  } else if (potential == "sine-product") {
    for (int i = 0; i < 2; ++i) periodic = periodic && (!wraps(i) || whole_periods(i, potential_k));
  }
  if (!periodic) throw Error(ErrorCode::InvalidArgument, "potential '" + potential + "' is not periodic on this chart");
  return GeometryContext(c, build_metric(), build_potential(), m);
}

std::vector<std::string> metric_catalog() {
  return {"flat", "scaled", "conformal-time", "conformal-space", "round-sphere", "hyperbolic"};
}

std::vector<std::string> potential_catalog() {
  return {"zero", "constant", "linear", "quadratic", "sine", "sine-product"};
}

}  // namespace pmelab
