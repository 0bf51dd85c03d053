#pragma once

#include "pmelab/grid_field.hpp"
#include "pmelab/nonlinearity.hpp"

namespace pmelab {

/// v = p u^{p-1} / (p-1)
double pressure_of(double u, double p);
/// u = [(p-1) v / p]^{1/(p-1)}
double density_of(double v, double p);

ScalarField pressure_transform(const ScalarField& u, double p);
SpaceTimeField pressure_transform(const SpaceTimeField& u, double p);
ScalarField inverse_pressure_transform(const ScalarField& v, double p);

struct SigmaValues {
  double sigma = 0.0;
  Vec3 sigma_x{0.0, 0.0, 0.0};  // coordinate covector, u held fixed
  double sigma_v = 0.0;
};

/// Sigma = p u^{p-2} N(t, x, u), Sigma_v = (p-2) N / u + N_u, Sigma_x = p u^{p-2} d_x N.
SigmaValues sigma_from_nonlinearity(const NonlinearitySpec& spec, double p, double t, const Vec3& x, double v);

struct SigmaFields {
  ScalarField sigma;
  ScalarField sigma_v;
  std::vector<Vec3> sigma_x;
};
SigmaFields sigma_fields(const NonlinearitySpec& spec, double p, const ScalarField& v);

}  // namespace pmelab
