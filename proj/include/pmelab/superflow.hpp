#pragma once

#include "pmelab/curvature.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

/// Smallest eigenvalue of [1/2 d_t g + (p-1) v Ric_f^m + kappa g] relative to g at every node.
ScalarField superflow_margin(const GridGeometry& geo, const ScalarField& v, double p, double kappa);
ScalarField superflow_margin(const GeometryContext& ctx, const ScalarField& v, double p, double kappa);

/// kappa = h + p (sup u)^{p-1} K with K the lower Ricci bound constant: (m-1) k for finite m, k for m = infinity.
double sufficient_kappa(const CurvatureReport& report, double p, double sup_u);

}  // namespace pmelab
