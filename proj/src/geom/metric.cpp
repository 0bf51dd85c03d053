#include "pmelab/metric.hpp"

#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/stencil.hpp"

namespace pmelab {

namespace {

Vec3 shifted(Vec3 x, int k, double s) {
  x[k] += s;
  return x;
}

}  // namespace

Vec3 ScalarFunction::gradient(int n, const Vec3& x, double t, double h) const {
  if (spatially_constant) return Vec3{0.0, 0.0, 0.0};
  if (grad) return grad(x, t);
  Vec3 out{0.0, 0.0, 0.0};
  for (int k = 0; k < n; ++k)
    out[k] = central_d1([&](double s) { return value(shifted(x, k, s - x[k]), t); }, x[k], h);
  return out;
}

Mat3 ScalarFunction::hessian(int n, const Vec3& x, double t, double h) const {
  if (spatially_constant) return zero_matrix();
  if (hess) return hess(x, t);
  Mat3 out = zero_matrix();
  for (int k = 0; k < n; ++k) {
    out[k][k] = central_d2([&](double s) { return value(shifted(x, k, s - x[k]), t); }, x[k], h);
    for (int l = k + 1; l < n; ++l) {
      auto dk = [&](double sl) {
        const Vec3 y = shifted(x, l, sl - x[l]);
        return central_d1([&](double s) { return value(shifted(y, k, s - y[k]), t); }, y[k], h);
      };
      out[k][l] = out[l][k] = central_d1(dk, x[l], h);
    }
  }
  return out;
}

double ScalarFunction::dt(const Vec3& x, double t) const {
  if (!time_dependent) return 0.0;
  if (time_derivative) return time_derivative(x, t);
  return central_d1([&](double s) { return value(x, s); }, t, 1e-3);
}

ScalarFunction zero_function() {
  ScalarFunction f;
  f.name = "zero";
  f.value = [](const Vec3&, double) { return 0.0; };
  f.spatially_constant = true;
  return f;
}

ScalarFunction constant_function(double c) {
  ScalarFunction f;
  f.name = "constant";
  f.value = [c](const Vec3&, double) { return c; };
  f.spatially_constant = true;
  return f;
}

ScalarFunction linear_function(const Vec3& a) {
  ScalarFunction f;
  f.name = "linear";
  f.value = [a](const Vec3& x, double) { return a[0] * x[0] + a[1] * x[1] + a[2] * x[2]; };
  f.grad = [a](const Vec3&, double) { return a; };
  f.hess = [](const Vec3&, double) { return zero_matrix(); };
  f.spatially_constant = (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0);
  return f;
}

ScalarFunction quadratic_function(double c) {
  ScalarFunction f;
  f.name = "quadratic";
  f.value = [c](const Vec3& x, double) { return 0.5 * c * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); };
  f.grad = [c](const Vec3& x, double) { return Vec3{c * x[0], c * x[1], c * x[2]}; };
  f.hess = [c](const Vec3&, double) {
    Mat3 h = zero_matrix();
    for (int i = 0; i < 3; ++i) h[i][i] = c;
    return h;
  };
  f.spatially_constant = (c == 0.0);
  return f;
}

ScalarFunction sine_function(double amp, int axis, double k) {
  ScalarFunction f;
  f.name = "sine";
  f.value = [=](const Vec3& x, double) { return amp * std::sin(k * x[axis]); };
  f.grad = [=](const Vec3& x, double) {
    Vec3 g{0.0, 0.0, 0.0};
    g[axis] = amp * k * std::cos(k * x[axis]);
    return g;
  };
  f.hess = [=](const Vec3& x, double) {
    Mat3 h = zero_matrix();
    h[axis][axis] = -amp * k * k * std::sin(k * x[axis]);
    return h;
  };
  f.spatially_constant = (amp == 0.0);
  return f;
}

ScalarFunction sine_product_function(double amp, double k) {
  ScalarFunction f;
  f.name = "sine-product";
  f.value = [=](const Vec3& x, double) { return amp * std::sin(k * x[0]) * std::sin(k * x[1]); };
  f.grad = [=](const Vec3& x, double) {
    return Vec3{amp * k * std::cos(k * x[0]) * std::sin(k * x[1]), amp * k * std::sin(k * x[0]) * std::cos(k * x[1]),
                0.0};
  };
  f.hess = [=](const Vec3& x, double) {
    Mat3 h = zero_matrix();
    const double s0 = std::sin(k * x[0]), c0 = std::cos(k * x[0]);
    const double s1 = std::sin(k * x[1]), c1 = std::cos(k * x[1]);
    h[0][0] = -amp * k * k * s0 * s1;
    h[1][1] = -amp * k * k * s0 * s1;
    h[0][1] = h[1][0] = amp * k * k * c0 * c1;
    return h;
  };
  f.spatially_constant = (amp == 0.0);
  return f;
}

MetricField::MetricField(int n, std::string name, MetricKind kind, MatFn g, MatFn dt, bool time_dependent,
                         GradFn dg, HessFn d2g)
    : n_(n),
      name_(std::move(name)),
      kind_(kind),
      g_(std::move(g)),
      dt_(std::move(dt)),
      time_dependent_(time_dependent),
      dg_(std::move(dg)),
      d2g_(std::move(d2g)) {
  if (n_ < 1 || n_ > kMaxDim) throw Error(ErrorCode::InvalidArgument, "metric dimension must be 1..3");
}

Mat3 MetricField::g(const Vec3& x, double t) const { return g_(x, t); }

Mat3 MetricField::dt(const Vec3& x, double t) const {
  if (!time_dependent_) return zero_matrix();
  if (dt_) return dt_(x, t);
  Mat3 out = zero_matrix();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i][j] = central_d1([&](double s) { return g_(x, s)[i][j]; }, t, fd_step);
  return out;
}

MetricGrad MetricField::dg(const Vec3& x, double t) const {
  if (dg_) return dg_(x, t);
  MetricGrad out{};
  for (int k = 0; k < n_; ++k) {
    out[k] = zero_matrix();
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        const double d = central_d1([&](double s) { return g_(shifted(x, k, s - x[k]), t)[i][j]; }, x[k], fd_step);
        out[k][i][j] = out[k][j][i] = d;
      }
  }
  return out;
}

MetricHess MetricField::d2g(const Vec3& x, double t) const {
  if (d2g_) return d2g_(x, t);
  MetricHess out{};
  for (auto& row : out)
    for (auto& m : row) m = zero_matrix();
  const double h = 2.0 * fd_step;
  for (int k = 0; k < n_; ++k) {
    for (int l = k; l < n_; ++l) {
      for (int i = 0; i < n_; ++i)
        for (int j = i; j < n_; ++j) {
          double d;
          if (k == l) {
            d = central_d2([&](double s) { return g_(shifted(x, k, s - x[k]), t)[i][j]; }, x[k], h);
          } else {
            auto dk = [&](double sl) {
              const Vec3 y = shifted(x, l, sl - x[l]);
              return central_d1([&](double s) { return g_(shifted(y, k, s - y[k]), t)[i][j]; }, y[k], h);
            };
            d = central_d1(dk, x[l], h);
          }
          out[k][l][i][j] = out[k][l][j][i] = d;
          out[l][k][i][j] = out[l][k][j][i] = d;
        }
    }
  }
  return out;
}

MetricField MetricField::flat(int n) {
  MetricField m(
      n, "flat", MetricKind::Flat, [n](const Vec3&, double) { return identity_matrix(n); },
      [](const Vec3&, double) { return zero_matrix(); }, false,
      [](const Vec3&, double) { return MetricGrad{zero_matrix(), zero_matrix(), zero_matrix()}; },
      [](const Vec3&, double) {
        MetricHess h{};
        for (auto& row : h)
          for (auto& mm : row) mm = zero_matrix();
        return h;
      });
  return m;
}

MetricField MetricField::scaled_flat(int n, double c) {
  if (!(c > 0.0)) throw Error(ErrorCode::SingularMetric, "scale must be positive");
  MetricField m = flat(n);
  m.name_ = "scaled";
  m.kind_ = MetricKind::Scaled;
  m.scale = c;
  m.g_ = [n, c](const Vec3&, double) { return scaled(n, identity_matrix(n), c); };
  return m;
}

MetricField MetricField::conformal_time(int n, double a) {
  MetricField m = flat(n);
  m.name_ = "conformal-time";
  m.kind_ = MetricKind::ConformalTime;
  m.rate = a;
  m.time_dependent_ = (a != 0.0);
  m.g_ = [n, a](const Vec3&, double t) { return scaled(n, identity_matrix(n), std::exp(2.0 * a * t)); };
  m.dt_ = [n, a](const Vec3&, double t) {
    return scaled(n, identity_matrix(n), 2.0 * a * std::exp(2.0 * a * t));
  };
  return m;
}

MetricField MetricField::conformal_space(int n, const ScalarFunction& psi, const std::string& name) {
  auto g = [n, psi](const Vec3& x, double t) { return scaled(n, identity_matrix(n), std::exp(2.0 * psi(x, t))); };
  auto dg = [n, psi](const Vec3& x, double t) {
    const double e = std::exp(2.0 * psi(x, t));
    const Vec3 d = psi.gradient(n, x, t);
    MetricGrad out{zero_matrix(), zero_matrix(), zero_matrix()};
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) out[k][i][i] = 2.0 * d[k] * e;
    return out;
  };
  auto d2g = [n, psi](const Vec3& x, double t) {
    const double e = std::exp(2.0 * psi(x, t));
    const Vec3 d = psi.gradient(n, x, t);
    const Mat3 h = psi.hessian(n, x, t);
    MetricHess out{};
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        out[k][l] = zero_matrix();
        if (k >= n || l >= n) continue;
        for (int i = 0; i < n; ++i) out[k][l][i][i] = (4.0 * d[k] * d[l] + 2.0 * h[k][l]) * e;
      }
    return out;
  };
  MetricField m(n, name, MetricKind::ConformalSpace, g, [](const Vec3&, double) { return zero_matrix(); }, false,
                dg, d2g);
  return m;
}

MetricField MetricField::round_sphere(double r) {
  const double r2 = r * r;
  auto g = [r2](const Vec3& x, double) {
    Mat3 m = zero_matrix();
    const double s = std::sin(x[0]);
    m[0][0] = r2;
    m[1][1] = r2 * s * s;
    return m;
  };
  auto dg = [r2](const Vec3& x, double) {
    MetricGrad out{zero_matrix(), zero_matrix(), zero_matrix()};
    out[0][1][1] = r2 * std::sin(2.0 * x[0]);
    return out;
  };
  auto d2g = [r2](const Vec3& x, double) {
    MetricHess out{};
    for (auto& row : out)
      for (auto& mm : row) mm = zero_matrix();
    out[0][0][1][1] = 2.0 * r2 * std::cos(2.0 * x[0]);
    return out;
  };
  MetricField m(2, "round-sphere", MetricKind::RoundSphere, g, [](const Vec3&, double) { return zero_matrix(); },
                false, dg, d2g);
  m.radius = r;
  return m;
}

MetricField MetricField::hyperbolic_half_plane() {
  ScalarFunction psi;
  psi.name = "minus-log-y";
  psi.value = [](const Vec3& x, double) { return -std::log(x[1]); };
  psi.grad = [](const Vec3& x, double) { return Vec3{0.0, -1.0 / x[1], 0.0}; };
  psi.hess = [](const Vec3& x, double) {
    Mat3 h = zero_matrix();
    h[1][1] = 1.0 / (x[1] * x[1]);
    return h;
  };
  MetricField m = conformal_space(2, psi, "hyperbolic");
  m.kind_ = MetricKind::Hyperbolic;
  return m;
}

MetricField MetricField::sampled(const Chart& chart, std::vector<Mat3> values, const std::string& name) {
  if (values.size() != chart.size()) throw Error(ErrorCode::ShapeMismatch, "sampled metric size mismatch");
  const int n = chart.dim();
  const std::size_t sz = chart.size();
  // Component arrays, then first and second derivative arrays by stencils.
  auto comp = std::make_shared<std::vector<std::vector<double>>>(9, std::vector<double>(sz));
  for (std::size_t p = 0; p < sz; ++p)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) (*comp)[3 * i + j][p] = values[p][i][j];
  auto deriv = [&chart](const std::vector<double>& f, int axis, bool second) {
    std::vector<double> out(f.size());
    const Axis& ax = chart.axis(axis);
    const auto stride = static_cast<std::ptrdiff_t>(chart.stride(axis));
    for (std::size_t p = 0; p < f.size(); ++p) {
      const int i = chart.multi_index(p)[axis];
      const double* line = f.data() + p - static_cast<std::ptrdiff_t>(i) * stride;
      out[p] = second ? stencil_d2(line, stride, i, ax.resolution, ax.spacing(), ax.topology == Topology::Periodic)
                      : stencil_d1(line, stride, i, ax.resolution, ax.spacing(), ax.topology == Topology::Periodic);
    }
    return out;
  };
  auto d1 = std::make_shared<std::vector<std::vector<double>>>(27);
  auto d2 = std::make_shared<std::vector<std::vector<double>>>(81);
  for (int k = 0; k < n; ++k)
    for (int c = 0; c < 9; ++c) {
      if (c / 3 >= n || c % 3 >= n) continue;
      (*d1)[9 * k + c] = deriv((*comp)[c], k, false);
    }
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int c = 0; c < 9; ++c) {
        if (c / 3 >= n || c % 3 >= n) continue;
        (*d2)[27 * k + 9 * l + c] = (k == l) ? deriv((*comp)[c], k, true) : deriv((*d1)[9 * k + c], l, false);
      }
  auto node = [chart](const Vec3& x) {
    std::array<int, 3> idx{0, 0, 0};
    for (int i = 0; i < chart.dim(); ++i) {
      const Axis& ax = chart.axis(i);
      const double s = (x[i] - ax.lo) / ax.spacing();
      int k = static_cast<int>(std::lround(s));
      if (std::abs(s - k) > 1e-6) throw Error(ErrorCode::OutOfChart, "sampled metric queried off the grid nodes");
      if (ax.topology == Topology::Periodic) k = ((k % ax.resolution) + ax.resolution) % ax.resolution;
      if (k < 0 || k >= ax.resolution) throw Error(ErrorCode::OutOfChart, "point outside sampled chart");
      idx[i] = k;
    }
    return chart.flat_index(idx);
  };
  auto g = [n, comp, node](const Vec3& x, double) {
    const std::size_t p = node(x);
    Mat3 m = zero_matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i][j] = (*comp)[3 * i + j][p];
    return m;
  };
  auto dg = [n, d1, node](const Vec3& x, double) {
    const std::size_t p = node(x);
    MetricGrad out{zero_matrix(), zero_matrix(), zero_matrix()};
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[k][i][j] = (*d1)[9 * k + 3 * i + j][p];
    return out;
  };
  auto d2g = [n, d2, node](const Vec3& x, double) {
    const std::size_t p = node(x);
    MetricHess out{};
    for (auto& row : out)
      for (auto& mm : row) mm = zero_matrix();
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            // symmetrize the mixed partials
            out[k][l][i][j] = 0.5 * ((*d2)[27 * k + 9 * l + 3 * i + j][p] + (*d2)[27 * l + 9 * k + 3 * i + j][p]);
          }
    return out;
  };
  MetricField m(n, name, MetricKind::Sampled, g, [](const Vec3&, double) { return zero_matrix(); }, false, dg, d2g);
  m.source_ = MetricSource::SampledGrid;
  return m;
}

GeometryContext::GeometryContext(Chart chart, MetricField metric, ScalarFunction potential, double m)
    : chart_(std::move(chart)), metric_(std::move(metric)), potential_(std::move(potential)), m_(m) {
  const int n = chart_.dim();
  if (metric_.dim() != n) throw Error(ErrorCode::ShapeMismatch, "metric dimension differs from chart dimension");
  if (!(m_ >= n)) throw Error(ErrorCode::DegenerateDimension, "synthetic dimension m must satisfy m >= n");
  // Positive definiteness and constancy of f on a subsample of the nodes.
  const std::size_t step = std::max<std::size_t>(1, chart_.size() / 4096);
  double max_grad = 0.0;
  for (std::size_t p = 0; p < chart_.size(); p += step) {
    const Vec3 x = chart_.point(p);
    Mat3 l;
    if (!cholesky(n, metric_.g(x, 0.0), l))
      throw Error(ErrorCode::SingularMetric, "metric not positive definite at a chart node");
    if (!potential_.spatially_constant) {
      const Vec3 df = potential_.gradient(n, x, 0.0);
      for (int i = 0; i < n; ++i) max_grad = std::max(max_grad, std::abs(df[i]));
    }
  }
  potential_constant_ = potential_.spatially_constant || max_grad <= 1e-12;
  if (m_ == n && !potential_constant_)
    throw Error(ErrorCode::DegenerateDimension, "m = n requires a spatially constant potential");
}

double GeometryContext::density(const Vec3& x, double t) const {
  return std::exp(-potential_(x, t)) * std::sqrt(determinant(n(), metric_.g(x, t)));
}

GeometryContext GeometryContext::with_chart(const Chart& chart) const {
  return GeometryContext(chart, metric_, potential_, m_);
}

GeometryContext GeometryContext::with_m(double m) const { return GeometryContext(chart_, metric_, potential_, m); }

}  // namespace pmelab
