#include "pmelab/max_point.hpp"

#include <cmath>

#include "pmelab/error.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

MaxPointReport replay_maximum_point(const GeometryContext& ctx, const SpaceTimeField& w, const CutoffSpec& cutoff,
                                    const ModelDistance& distance) {
  const CutoffParams& cp = cutoff.params();
  const Chart& chart = ctx.chart();
  if (w.chart() != chart) throw Error(ErrorCode::ShapeMismatch, "field and geometry live on different charts");
  const double start = cp.t0 - cp.T;
  const double ttol = 1e-9 * std::max({1.0, std::abs(cp.t0), cp.T});

  std::vector<std::size_t> frames;
  for (std::size_t k = 0; k < w.frame_count(); ++k)
    if (w.times()[k] >= start - ttol && w.times()[k] <= cp.t0 + ttol) frames.push_back(k);
  if (frames.empty()) throw Error(ErrorCode::EmptyCylinder, "no stored frame inside the time window");

  auto eta_field = [&](std::size_t k) {
    const double t = w.times()[k];
    std::vector<double> out(chart.size());
    const auto& wv = w.frame_values(k);
    for (std::size_t q = 0; q < chart.size(); ++q) {
      const double rho = distance(chart.point(q), t).first;
      out[q] = rho <= cp.R ? cutoff.value(rho, t) * wv[q] : 0.0;
    }
    return ScalarField(chart, t, std::move(out));
  };

  MaxPointReport rep;
  bool found = false;
  for (std::size_t k : frames) {
    const double t = w.times()[k];
    const auto& wv = w.frame_values(k);
    for (std::size_t q = 0; q < chart.size(); ++q) {
      const double rho = distance(chart.point(q), t).first;
      if (rho > cp.R) continue;
      const double val = cutoff.value(rho, t) * wv[q];
      if (!found || val > rep.value) {
        found = true;
        rep.value = val;
        rep.frame = k;
        rep.node = q;
      }
    }
  }
  if (!found) throw Error(ErrorCode::EmptyCylinder, "no node inside the ball");
  rep.t = w.times()[rep.frame];
  rep.x = chart.point(rep.node);
  rep.at_start_time = std::abs(rep.t - start) <= ttol;

  if (!(rep.value > 0.0)) {
    rep.branch = "trivial";
    return rep;
  }
  if (rep.at_start_time || !chart.interior(rep.node)) {
    rep.branch = "boundary";
    return rep;
  }
  rep.branch = "interior";
  const GridGeometry geo = GridGeometry::build(ctx, rep.t);
  const ScalarField ew = eta_field(rep.frame);
  const GradientField g = gradient(geo, ew);
  const HessianField h = hessian(geo, ew);
  const ScalarField lap = f_laplacian(geo, ew);
  double hmax = 0.0;
  for (int i = 0; i < chart.dim(); ++i) hmax = std::max(hmax, chart.axis(i).spacing());
  rep.grad_norm = std::sqrt(g.norm2[rep.node]);
  rep.grad_tol = std::sqrt(h.norm2[rep.node]) * hmax + 1e-10 * std::max(1.0, rep.value);
  rep.lap_f = lap[rep.node];
  rep.lap_tol = std::abs(dot(geo.n, geo.drift[rep.node], g.covector[rep.node])) + 1e-8 * std::max(1.0, rep.value);
  rep.first_order_ok = rep.grad_norm <= rep.grad_tol;
  rep.second_order_ok = rep.lap_f <= rep.lap_tol;
  if (rep.frame > 0) {
    const ScalarField prev = eta_field(rep.frame - 1);
    rep.dt_backward = ew[rep.node] - prev[rep.node];
    rep.time_order_ok = rep.dt_backward >= -1e-12 * std::max(1.0, rep.value);
  }
  return rep;
}

}  // namespace pmelab
