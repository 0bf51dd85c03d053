#include "pmelab/superflow.hpp"

#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

ScalarField superflow_margin(const GridGeometry& geo, const ScalarField& v, double p, double kappa) {
  if (v.chart() != geo.chart) throw Error(ErrorCode::ShapeMismatch, "pressure chart differs from geometry chart");
  const int n = geo.n;
  std::vector<double> out(v.size());
  for (std::size_t q = 0; q < v.size(); ++q) {
    Mat3 a = zero_matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        a[i][j] = 0.5 * geo.dtg[q][i][j] + (p - 1.0) * v[q] * geo.ric_fm[q][i][j] + kappa * geo.g[q][i][j];
    out[q] = min_generalized_eigenvalue(n, a, geo.g[q]);
  }
  return ScalarField(v.chart(), v.time(), std::move(out));
}

ScalarField superflow_margin(const GeometryContext& ctx, const ScalarField& v, double p, double kappa) {
  return superflow_margin(GridGeometry::build(ctx, v.time()), v, p, kappa);
}

double sufficient_kappa(const CurvatureReport& report, double p, double sup_u) {
  const double lower = std::isfinite(report.m) ? (report.m - 1.0) * report.k : report.k;
  return report.h + p * std::pow(sup_u, p - 1.0) * lower;
}

}  // namespace pmelab
