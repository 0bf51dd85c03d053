#pragma once

#include <vector>

#include "pmelab/manufacture.hpp"
#include "pmelab/nonlinearity.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

/// Pressure v at one time with its time derivative and the source terms.
struct PressureSlice {
  double t = 0.0;
  ScalarField v;
  ScalarField v_t;
  ScalarField sigma;
  ScalarField sigma_v;
  std::vector<Vec3> sigma_x;  // coordinate covector
};

/// Closed-form v and v_t; Sigma from the closed form, Sigma_x its grid gradient, Sigma_v = 0.
PressureSlice manufactured_slice(const GeometryContext& ctx, const GridGeometry& geo, const PressureExpr& expr,
                                 double p, double t);

/// v from a density frame; v_t = p u^{p-2} times the semi-discrete right-hand side.
PressureSlice solver_slice(const PmeOperator& op, const ScalarField& u, const NonlinearitySpec& spec, double p);
std::vector<PressureSlice> solver_history(const GeometryContext& ctx, const SpaceTimeField& u,
                                          const NonlinearitySpec& spec, double p, double floor = 1e-10);

/// Grid derivatives of v shared by the identity and inequality assemblies.
struct PressureDerivatives {
  GradientField gv;
  HessianField hess;
  ScalarField lap_f;     // Delta_f v
  ScalarField df_dv;     // <grad f, grad v>
  ScalarField grad2;     // |grad v|^2
  GradientField g2;      // gradient of |grad v|^2
  ScalarField dv_dg2;    // <grad v, grad |grad v|^2>
  ScalarField curv;      // [1/2 d_t g + (p-1) v Ric_f^m](grad v, grad v)
  ScalarField dfdv2_m;   // <grad f, grad v>^2 / (m - n), zero when the term is absent
  ScalarField dt_grad2;  // 2 <grad v, grad v_t> - d_t g(grad v, grad v)
  ScalarField dv_sigx;   // <grad v, Sigma_x>
};

PressureDerivatives differentiate(const GridGeometry& geo, const PressureSlice& s, double p);

}  // namespace pmelab
