#include "pmelab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "pmelab/error.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

namespace {

struct AnalyticCase {
  std::function<GeometryContext(int)> make;
  std::function<double(const Vec3&)> w;
  std::function<Vec3(const Vec3&)> grad_vector;  // g^{ij} d_j w
  std::function<double(const Vec3&)> lap;
  std::function<Mat3(const Vec3&)> hess;
};

AnalyticCase lookup(const std::string& name) {
  constexpr double pi = std::numbers::pi;
  AnalyticCase c;
  if (name == "sin" || name == "sin-weighted") {
    const double eps = name == "sin" ? 0.0 : 0.3;
    c.make = [eps](int nres) {
      return GeometryContext(torus_chart(1, nres), MetricField::flat(1),
                             eps == 0.0 ? zero_function() : sine_function(eps, 0), 2.0);
    };
    c.w = [](const Vec3& x) { return std::sin(x[0]); };
    c.grad_vector = [](const Vec3& x) { return Vec3{std::cos(x[0]), 0.0, 0.0}; };
    c.lap = [eps](const Vec3& x) { return -std::sin(x[0]) - eps * std::cos(x[0]) * std::cos(x[0]); };
    c.hess = [](const Vec3& x) {
      Mat3 h = zero_matrix();
      h[0][0] = -std::sin(x[0]);
      return h;
    };
  } else if (name == "sin-2d") {
    c.make = [](int nres) { return GeometryContext(torus_chart(2, nres), MetricField::flat(2), zero_function(), 3.0); };
    c.w = [](const Vec3& x) { return std::sin(x[0]); };
    c.grad_vector = [](const Vec3& x) { return Vec3{std::cos(x[0]), 0.0, 0.0}; };
    c.lap = [](const Vec3& x) { return -std::sin(x[0]); };
    c.hess = [](const Vec3& x) {
      Mat3 h = zero_matrix();
      h[0][0] = -std::sin(x[0]);
      return h;
    };
  } else if (name == "linear") {
    c.make = [](int nres) {
      return GeometryContext(box_chart({0.0}, {1.0}, nres, Topology::Bounded), MetricField::flat(1), zero_function(),
                             2.0);
    };
    c.w = [](const Vec3& x) { return x[0]; };
    c.grad_vector = [](const Vec3&) { return Vec3{1.0, 0.0, 0.0}; };
    c.lap = [](const Vec3&) { return 0.0; };
    c.hess = [](const Vec3&) { return zero_matrix(); };
  } else if (name == "quadratic") {
    c.make = [](int nres) {
      return GeometryContext(box_chart({-1.0, -1.0}, {1.0, 1.0}, nres, Topology::Bounded), MetricField::flat(2),
                             zero_function(), 3.0);
    };
    c.w = [](const Vec3& x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); };
    c.grad_vector = [](const Vec3& x) { return Vec3{x[0], x[1], 0.0}; };
    c.lap = [](const Vec3&) { return 2.0; };
    c.hess = [](const Vec3&) { return identity_matrix(2); };
  } else if (name == "sphere-cos") {
    c.make = [pi](int nres) {
      Chart chart({Axis{0.1, pi - 0.1, Topology::Bounded, nres}, Axis{0.0, 2.0 * pi, Topology::Periodic, nres}});
      return GeometryContext(chart, MetricField::round_sphere(1.0), zero_function(), 3.0);
    };
    c.w = [](const Vec3& x) { return std::cos(x[0]); };
    c.grad_vector = [](const Vec3& x) { return Vec3{-std::sin(x[0]), 0.0, 0.0}; };
    c.lap = [](const Vec3& x) { return -2.0 * std::cos(x[0]); };
    c.hess = [](const Vec3& x) {
      Mat3 h = zero_matrix();
      h[0][0] = -std::cos(x[0]);
      h[1][1] = -std::cos(x[0]) * std::sin(x[0]) * std::sin(x[0]);
      return h;
    };
  } else {
    throw Error(ErrorCode::UnknownCase, "unknown analytic case '" + name + "'");
  }
  return c;
}

}  // namespace

std::vector<std::string> convergence_cases() {
  return {"sin", "sin-weighted", "sin-2d", "linear", "quadratic", "sphere-cos"};
}

std::vector<double> observed_orders(const std::vector<double>& errors, double floor) {
  std::vector<double> orders;
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    if (errors[i] <= floor && errors[i + 1] <= floor)
      orders.push_back(std::numeric_limits<double>::infinity());
    else
      orders.push_back(std::log2(errors[i] / std::max(errors[i + 1], 1e-300)));
  }
  return orders;
}

DiffReport convergence_order(const std::string& op, const std::string& analytic_case, const std::vector<int>& levels) {
  if (levels.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two refinement levels");
  if (op != "gradient" && op != "f_laplacian" && op != "hessian" && op != "bochner_residual")
    throw Error(ErrorCode::UnknownCase, "unknown operator '" + op + "'");
  const AnalyticCase c = lookup(analytic_case);
  DiffReport rep;
  rep.op = op;
  rep.analytic_case = analytic_case;
  rep.levels = levels;
  for (int nres : levels) {
    const GeometryContext ctx = c.make(nres);
    const GridGeometry geo = GridGeometry::build(ctx, 0.0);
    const ScalarField w = ScalarField::sample(ctx.chart(), 0.0, c.w);
    const int n = ctx.n();
    std::vector<double> err(w.size(), 0.0);
    if (op == "gradient") {
      const GradientField g = gradient(geo, w);
      for (std::size_t p = 0; p < w.size(); ++p) {
        const Vec3 ex = c.grad_vector(ctx.chart().point(p));
        double e = 0.0;
        for (int i = 0; i < n; ++i) e = std::max(e, std::abs(g.vector[p][i] - ex[i]));
        err[p] = e;
      }
    } else if (op == "f_laplacian") {
      const ScalarField l = f_laplacian(geo, w);
      for (std::size_t p = 0; p < w.size(); ++p) err[p] = l[p] - c.lap(ctx.chart().point(p));
    } else if (op == "hessian") {
      const HessianField h = hessian(geo, w);
      for (std::size_t p = 0; p < w.size(); ++p) {
        const Mat3 ex = c.hess(ctx.chart().point(p));
        double e = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) e = std::max(e, std::abs(h.h[p][i][j] - ex[i][j]));
        err[p] = e;
      }
    } else {
      err = bochner_residual(geo, w).residual.values();
    }
    const ScalarField ef(ctx.chart(), 0.0, std::move(err));
    rep.error_max.push_back(interior_max_abs(ef));
    rep.error_l2.push_back(interior_weighted_l2(ef, geo.density));
  }
  rep.orders = observed_orders(rep.error_max);
  rep.observed_order = *std::min_element(rep.orders.begin(), rep.orders.end());
  rep.exact = std::all_of(rep.error_max.begin(), rep.error_max.end(), [](double e) { return e <= 1e-12; });
  return rep;
}

}  // namespace pmelab
