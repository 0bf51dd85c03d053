#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pmelab/grid_field.hpp"
#include "pmelab/nonlinearity.hpp"
#include "pmelab/operators.hpp"

namespace pmelab {

enum class Stepper { RK2, RK4 };

struct StepPolicy {
  enum class Mode { Fixed, Cfl };
  Mode mode = Mode::Cfl;
  double dt = 1e-3;     // fixed mode
  double safety = 0.4;  // CFL mode, in (0, 1]
};

struct SolverConfig {
  double p = 2.0;
  Stepper stepper = Stepper::RK2;
  StepPolicy policy;
  double floor = 1e-10;
  double t_start = 0.0;
  double t_end = 1.0;
  int stride = 8;
  int outputs = 0;  // stored intervals; 0 derives them from stride and the first step
  double blowup_cap = 1e12;
  double min_dt = 1e-14;

  void validate() const;
};

struct SolveResult {
  SpaceTimeField u;
  std::vector<double> step_time;  // time at the end of each step
  std::vector<double> dt_trace;
  std::vector<double> min_u;
  std::vector<double> max_u;
  std::vector<long> clamps;  // floor activations in each step
  long floor_activations = 0;
  double wall_time = 0.0;
};

/// Right-hand side Delta_f(u^p) + N with cached geometry.
/// Periodic charts with a diagonal metric use a conservative flux form;
/// otherwise the f-Laplacian stencils are used and the two edge layers of bounded axes are held fixed.
class PmeOperator {
 public:
  PmeOperator(const GeometryContext& ctx, NonlinearitySpec spec, double p, double floor);

  ScalarField rhs(const ScalarField& u, double t) const;
  /// Step bound from the diffusion coefficient, drift and d_u N at this state.
  double stable_dt(const ScalarField& u, double t, double safety, Stepper stepper) const;
  bool uses_flux_form() const { return flux_form_; }
  const GridGeometry& geometry(double t) const;

 private:
  const GeometryContext* ctx_;
  NonlinearitySpec spec_;
  double p_;
  double floor_;
  bool flux_form_ = false;
  mutable std::shared_ptr<GridGeometry> cache_;
};

ScalarField step_rhs(const GeometryContext& ctx, const ScalarField& u, const NonlinearitySpec& spec, double p, double t,
                     double floor = 1e-10);

SolveResult solve(const GeometryContext& ctx, const ScalarField& u0, const NonlinearitySpec& spec,
                  const SolverConfig& cfg);

/// Columns t, min_u, max_u, dt, clamps.
void write_solve_trace_csv(const SolveResult& result, std::ostream& os);

/// Initial data catalog.
struct InitialData {
  std::string tag = "sine";  // constant | sine | cosine-2d | barenblatt | bump
  double c0 = 1.0;
  double amp = 0.5;
  double k = 1.0;
  double phase = 0.0;
  double amp2 = 0.0;   // cosine-2d second-axis amplitude
  double width = 1.0;  // bump
  double barenblatt_c = 1.0;
  double barenblatt_p = 2.0;
  double barenblatt_t = 1.0;
};
ScalarField make_initial_data(const Chart& chart, const InitialData& data, double floor = 1e-10);

/// Barenblatt profile u = t^{-alpha} (C - kappa |x|^2 t^{-2 alpha / n})_+^{1/(p-1)} for u_t = Delta u^p.
double barenblatt(double p, int n, double c, const Vec3& x, double t);

}  // namespace pmelab
