#pragma once

#include <string>

#include "pmelab/cutoff.hpp"
#include "pmelab/distance.hpp"
#include "pmelab/grid_field.hpp"
#include "pmelab/metric.hpp"

namespace pmelab {

struct MaxPointReport {
  std::string branch;  // trivial | interior | boundary
  double value = 0.0;  // max of eta w over the cylinder samples
  Vec3 x{0.0, 0.0, 0.0};
  double t = 0.0;
  std::size_t frame = 0;
  std::size_t node = 0;
  bool at_start_time = false;
  double grad_norm = 0.0;  // |grad(eta w)| at the argmax
  double grad_tol = 0.0;   // |Hess(eta w)| times the largest spacing
  double lap_f = 0.0;      // Delta_f(eta w) at the argmax
  double lap_tol = 0.0;
  double dt_backward = 0.0;  // (eta w)(t1) - (eta w)(previous frame)
  bool first_order_ok = true;
  bool second_order_ok = true;
  bool time_order_ok = true;
};

/// Argmax of eta w over frames in [t0 - T, t0] and nodes with rho <= R; throws EmptyCylinder when none.
/// The discrete first- and second-order conditions are checked at an interior argmax.
MaxPointReport replay_maximum_point(const GeometryContext& ctx, const SpaceTimeField& w, const CutoffSpec& cutoff,
                                    const ModelDistance& distance);

}  // namespace pmelab
