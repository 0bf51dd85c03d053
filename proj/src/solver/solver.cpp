#include "pmelab/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

#include "pmelab/error.hpp"

namespace pmelab {

void SolverConfig::validate() const {
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "p must exceed 1");
  if (!(floor > 0.0)) throw Error(ErrorCode::InvalidArgument, "positivity floor must be > 0");
  if (!(t_end > t_start)) throw Error(ErrorCode::InvalidArgument, "empty time window");
  if (stride < 1) throw Error(ErrorCode::InvalidArgument, "stride must be >= 1");
  if (policy.mode == StepPolicy::Mode::Cfl && !(policy.safety > 0.0 && policy.safety <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "CFL safety factor must lie in (0, 1]");
  if (policy.mode == StepPolicy::Mode::Fixed && !(policy.dt > 0.0))
    throw Error(ErrorCode::InvalidArgument, "fixed time step must be > 0");
}

PmeOperator::PmeOperator(const GeometryContext& ctx, NonlinearitySpec spec, double p, double floor)
    : ctx_(&ctx), spec_(std::move(spec)), p_(p), floor_(floor) {
  spec_.floor = floor;
  const GridGeometry& geo = geometry(0.0);
  flux_form_ = ctx.chart().all_periodic() && geo.diagonal;
}

const GridGeometry& PmeOperator::geometry(double t) const {
  if (!cache_ || (!ctx_->is_static() && cache_->t != t))
    cache_ = std::make_shared<GridGeometry>(GridGeometry::build(*ctx_, t));
  return *cache_;
}

ScalarField PmeOperator::rhs(const ScalarField& u, double t) const {
  const Chart& chart = ctx_->chart();
  if (u.chart() != chart) throw Error(ErrorCode::ShapeMismatch, "state chart differs from geometry chart");
  const GridGeometry& geo = geometry(t);
  const std::size_t sz = u.size();
  const int n = chart.dim();
  std::vector<double> w(sz);
  for (std::size_t q = 0; q < sz; ++q) w[q] = std::pow(std::max(u[q], floor_), p_);
  std::vector<double> out(sz, 0.0);
  if (flux_form_) {
    std::vector<double> coef(sz), face(sz);
    for (int ax = 0; ax < n; ++ax) {
      const Axis& a = chart.axis(ax);
      const std::size_t st = chart.stride(ax);
      const int nres = a.resolution;
      const double h = a.spacing();
      for (std::size_t q = 0; q < sz; ++q) coef[q] = geo.density[q] * geo.ginv[q][ax][ax];
      auto nb = [&](std::size_t q, int i, int off) {
        const int j = ((i + off) % nres + nres) % nres;
        return q + static_cast<std::size_t>(j) * st - static_cast<std::size_t>(i) * st;
      };
      // face q holds the flux at x_i + h/2
      for (std::size_t q = 0; q < sz; ++q) {
        const int i = static_cast<int>((q / st) % static_cast<std::size_t>(nres));
        const std::size_t m1 = nb(q, i, -1), p1 = nb(q, i, 1), p2 = nb(q, i, 2);
        const double c = (-coef[m1] + 9.0 * coef[q] + 9.0 * coef[p1] - coef[p2]) / 16.0;
        const double dw = (w[m1] - 27.0 * w[q] + 27.0 * w[p1] - w[p2]) / (24.0 * h);
        face[q] = c * dw;
      }
      for (std::size_t q = 0; q < sz; ++q) {
        const int i = static_cast<int>((q / st) % static_cast<std::size_t>(nres));
        const std::size_t m2 = nb(q, i, -2), m1 = nb(q, i, -1), p1 = nb(q, i, 1);
        out[q] += (face[m2] - 27.0 * face[m1] + 27.0 * face[q] - face[p1]) / (24.0 * h);
      }
    }
    for (std::size_t q = 0; q < sz; ++q) out[q] /= geo.density[q];
  } else {
    out = f_laplacian(geo, ScalarField(chart, t, w)).values();
  }
  if (!spec_.is_zero()) {
    for (std::size_t q = 0; q < sz; ++q) out[q] += spec_.value(t, chart.point(q), std::max(u[q], floor_));
  }
  if (!flux_form_) {
    for (std::size_t q = 0; q < sz; ++q)
      if (!chart.interior(q)) out[q] = 0.0;
  }
  ScalarField r(chart, t, std::move(out));
  r.require_finite("PME right-hand side");
  return r;
}

double PmeOperator::stable_dt(const ScalarField& u, double t, double safety, Stepper stepper) const {
  const GridGeometry& geo = geometry(t);
  const Chart& chart = ctx_->chart();
  const int n = chart.dim();
  const double h = chart.min_spacing();
  // Spectral radius of the 4th-order second-difference stencils is below 5.5/h^2 per axis,
  // of the first-difference stencil below 1.4/h.
  double rate = 0.0;
  for (std::size_t q = 0; q < u.size(); ++q) {
    const double uq = std::max(u[q], floor_);
    const double d = p_ * std::pow(uq, p_ - 1.0);
    const double lam = max_generalized_eigenvalue(n, geo.ginv[q], identity_matrix(n));
    double b = 0.0;
    for (int i = 0; i < n; ++i) b = std::max(b, std::abs(geo.drift[q][i]));
    double r = 5.5 * n * d * lam / (h * h) + 1.4 * b * d / h;
    if (!spec_.is_zero()) r += std::abs(spec_.du(t, chart.point(q), uq));
    rate = std::max(rate, r);
  }
  const double radius = stepper == Stepper::RK2 ? 2.0 : 2.78;
  if (rate <= 0.0) return std::numeric_limits<double>::infinity();
  return safety * radius / rate;
}

ScalarField step_rhs(const GeometryContext& ctx, const ScalarField& u, const NonlinearitySpec& spec, double p, double t,
                     double floor) {
  return PmeOperator(ctx, spec, p, floor).rhs(u, t);
}

namespace {

void axpy(std::vector<double>& y, const std::vector<double>& x, double a) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

SolveResult solve(const GeometryContext& ctx, const ScalarField& u0, const NonlinearitySpec& spec,
                  const SolverConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  if (u0.chart() != ctx.chart()) throw Error(ErrorCode::ShapeMismatch, "initial data chart differs");
  u0.require_finite("initial data");
  if (u0.min() < cfg.floor) throw Error(ErrorCode::NonPositiveInput, "initial data below the positivity floor");
  const PmeOperator op(ctx, spec, cfg.p, cfg.floor);
  const double window = cfg.t_end - cfg.t_start;

  // Uniform output grid: each output interval is split into equal steps.
  double dt0 = cfg.policy.mode == StepPolicy::Mode::Fixed
                   ? cfg.policy.dt
                   : op.stable_dt(u0, cfg.t_start, cfg.policy.safety, cfg.stepper);
  dt0 = std::min(dt0, window);
  const double interval0 = cfg.stride * dt0;
  const long n_out = cfg.outputs > 0 ? cfg.outputs
                                     : std::max<long>(1, static_cast<long>(std::ceil(window / interval0 - 1e-9)));
  const double interval = window / static_cast<double>(n_out);

  SolveResult res;
  std::vector<double> times{cfg.t_start};
  std::vector<std::vector<double>> frames{u0.values()};
  std::vector<double> u = u0.values();
  const Chart& chart = ctx.chart();
  const std::size_t sz = u.size();
  double t = cfg.t_start;

  auto eval = [&](const std::vector<double>& state, double tt) {
    return op.rhs(ScalarField(chart, tt, state), tt).values();
  };

  for (long k = 0; k < n_out; ++k) {
    const double t_target = cfg.t_start + interval * static_cast<double>(k + 1);
    long substeps = cfg.stride;
    if (cfg.policy.mode == StepPolicy::Mode::Cfl) {
      const double dt_cfl = op.stable_dt(ScalarField(chart, t, u), t, cfg.policy.safety, cfg.stepper);
      substeps = std::max<long>(1, static_cast<long>(std::ceil((t_target - t) / dt_cfl - 1e-9)));
    } else {
      substeps = std::max<long>(1, static_cast<long>(std::ceil(interval / cfg.policy.dt - 1e-9)));
    }
    const double dt = (t_target - t) / static_cast<double>(substeps);
    if (dt < cfg.min_dt) throw Error(ErrorCode::StepCollapse, "time step fell below " + std::to_string(cfg.min_dt));
    for (long s = 0; s < substeps; ++s) {
      const double ts = (s + 1 == substeps) ? t_target : t + dt;
      const double h = ts - t;
      std::vector<double> next = u;
      if (cfg.stepper == Stepper::RK2) {
        const auto k1 = eval(u, t);
        std::vector<double> u1 = u;
        axpy(u1, k1, h);
        const auto k2 = eval(u1, t + h);
        axpy(next, k1, 0.5 * h);
        axpy(next, k2, 0.5 * h);
      } else {
        const auto k1 = eval(u, t);
        std::vector<double> tmp = u;
        axpy(tmp, k1, 0.5 * h);
        const auto k2 = eval(tmp, t + 0.5 * h);
        tmp = u;
        axpy(tmp, k2, 0.5 * h);
        const auto k3 = eval(tmp, t + 0.5 * h);
        tmp = u;
        axpy(tmp, k3, h);
        const auto k4 = eval(tmp, t + h);
        axpy(next, k1, h / 6.0);
        axpy(next, k2, h / 3.0);
        axpy(next, k3, h / 3.0);
        axpy(next, k4, h / 6.0);
      }
      long clamps = 0;
      double mn = std::numeric_limits<double>::infinity(), mx = -mn;
      for (std::size_t q = 0; q < sz; ++q) {
        if (!std::isfinite(next[q])) throw Error(ErrorCode::NonFiniteField, "solution became non-finite");
        if (next[q] < cfg.floor) {
          next[q] = cfg.floor;
          ++clamps;
        }
        mn = std::min(mn, next[q]);
        mx = std::max(mx, next[q]);
      }
      if (mx > cfg.blowup_cap) throw Error(ErrorCode::BlowUp, "max u exceeded the cap at t = " + std::to_string(ts));
      u.swap(next);
      t = ts;
      res.step_time.push_back(t);
      res.dt_trace.push_back(h);
      res.min_u.push_back(mn);
      res.max_u.push_back(mx);
      res.clamps.push_back(clamps);
      res.floor_activations += clamps;
    }
    times.push_back(t_target);
    frames.push_back(u);
  }
  res.u = SpaceTimeField(chart, std::move(times), std::move(frames));
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

void write_solve_trace_csv(const SolveResult& result, std::ostream& os) {
  os.precision(17);
  os << "t,min_u,max_u,dt,clamps\n";
  for (std::size_t i = 0; i < result.step_time.size(); ++i)
    os << result.step_time[i] << "," << result.min_u[i] << "," << result.max_u[i] << "," << result.dt_trace[i] << ","
       << result.clamps[i] << "\n";
}

double barenblatt(double p, int n, double c, const Vec3& x, double t) {
  const double alpha = n / (n * (p - 1.0) + 2.0);
  const double kappa = alpha * (p - 1.0) / (2.0 * p * n);
  double r2 = 0.0;
  for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
  const double core = c - kappa * r2 * std::pow(t, -2.0 * alpha / n);
  if (core <= 0.0) return 0.0;
  return std::pow(t, -alpha) * std::pow(core, 1.0 / (p - 1.0));
}

ScalarField make_initial_data(const Chart& chart, const InitialData& d, double floor) {
  const int n = chart.dim();
  std::function<double(const Vec3&)> fn;
  if (d.tag == "constant") {
    fn = [d](const Vec3&) { return d.c0; };
  } else if (d.tag == "sine") {
    fn = [d](const Vec3& x) { return d.c0 + d.amp * std::sin(d.k * x[0] + d.phase); };
  } else if (d.tag == "cosine-2d") {
    fn = [d](const Vec3& x) { return d.c0 + d.amp * std::sin(d.k * x[0] + d.phase) + d.amp2 * std::cos(d.k * x[1]); };
  } else if (d.tag == "bump") {
    fn = [d, n](const Vec3& x) {
      double r2 = 0.0;
      for (int i = 0; i < n; ++i) r2 += x[i] * x[i];
      return d.c0 + d.amp * std::exp(-r2 / (2.0 * d.width * d.width));
    };
  } else if (d.tag == "barenblatt") {
    fn = [d, n, floor](const Vec3& x) {
      return std::max(barenblatt(d.barenblatt_p, n, d.barenblatt_c, x, d.barenblatt_t), floor);
    };
  } else {
    throw Error(ErrorCode::UnknownCase, "unknown initial data tag '" + d.tag + "'");
  }
  if (n < 2 && d.tag == "cosine-2d") throw Error(ErrorCode::InvalidArgument, "cosine-2d needs a 2-d chart");
  return ScalarField::sample(chart, 0.0, fn);
}

}  // namespace pmelab
