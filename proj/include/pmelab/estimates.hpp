#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pmelab/distance.hpp"
#include "pmelab/grid_field.hpp"
#include "pmelab/nonlinearity.hpp"
#include "pmelab/operators.hpp"
#include "pmelab/pressure.hpp"

namespace pmelab {

/// Two gradient-estimate families: the beta-weighted one (|grad v| / v^{beta/2}) and the
/// optimally weighted one (v^{1/(2(p-1))} |grad v|), each in local, global and static form.
enum class Theorem { BetaLocal, BetaGlobal, BetaStatic, OptimalLocal, OptimalGlobal, OptimalStatic };

std::string theorem_tag(Theorem th);
Theorem parse_theorem(const std::string& tag);
bool is_beta_family(Theorem th);
bool is_global(Theorem th);
bool is_static(Theorem th);

/// Q_{R,T} = {rho(x, t) <= R, t0 - T <= t <= t0}
struct Cylinder {
  Vec3 x0{0.0, 0.0, 0.0};
  double t0 = 1.0;
  double R = 1.0;
  double T = 1.0;
};

/// Throws ExponentOutOfRange when (p, m, beta) is outside the family's range.
void check_estimate_exponents(Theorem th, double p, double m, double beta);

/// Scalar inputs of the right-hand side at one time.
struct RhsInputs {
  double p = 2.0;
  double beta = 0.0;
  double M = 1.0;
  double k = 0.0;
  double h = 0.0;
  double R = 1.0;
  double T = 1.0;
  double t0 = 1.0;
  double t = 1.0;
  double sup_sigma_x = 0.0;  // sup of the Sigma_x term, already raised to 1/3
  double sup_sigma_v = 0.0;  // sup of the Sigma / Sigma_v term
};

struct RhsTerm {
  std::string name;
  double value = 0.0;
};

/// The right-hand side without C, term by term, in the printed order.
std::vector<RhsTerm> rhs_terms(Theorem th, const RhsInputs& in);
double rhs_total(const std::vector<RhsTerm>& terms);

/// Pointwise integrands of the two sup-terms.
double sigma_x_integrand(Theorem th, double p, double beta, double v, double sigma_x_norm);
double sigma_v_integrand(Theorem th, double p, double beta, double v, double sigma, double sigma_v);
/// w = |grad v|_g^2 / v^beta; throws NonPositiveInput when v <= 0.
ScalarField w_field(const GridGeometry& geo, const ScalarField& v, double beta);
SpaceTimeField w_field(const GeometryContext& ctx, const SpaceTimeField& v, double beta);

/// Left-hand side at a point from v and |grad v|_g.
double estimate_lhs(Theorem th, double p, double beta, double v, double grad_norm);

struct EstimateContext {
  const GeometryContext* ctx = nullptr;
  SpaceTimeField v;
  std::vector<SigmaFields> sigma;  // one per frame of v
  double p = 2.0;
  double beta = 0.0;
  Cylinder cyl;
  double k = 0.0;
  double h = 0.0;
  ModelDistance distance;
  /// Frames inside [t0 - T, t0].
  std::vector<std::size_t> window;
  /// Per window frame: node in B_R and in B_{R/2}.
  std::vector<std::vector<char>> in_r, in_half;
  double M = 0.0;

  double m() const;
};

/// Builds v, Sigma and the cylinder masks from a solution; for global theorems every node belongs to the cylinder.
EstimateContext make_estimate_context(const GeometryContext& ctx, const SpaceTimeField& u, const NonlinearitySpec& spec,
                                      double p, double beta, const Cylinder& cyl, double k, double h, bool global);

struct EstimateSample {
  std::size_t frame = 0;
  std::size_t node = 0;
  double t = 0.0;
  Vec3 x{0.0, 0.0, 0.0};
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct SliceRhs {
  double t = 0.0;
  std::vector<RhsTerm> terms;
  double total = 0.0;
};

struct EstimateReport {
  Theorem theorem = Theorem::BetaStatic;
  double p = 0.0;
  double m = 0.0;
  double beta = 0.0;
  double M = 0.0;
  double k = 0.0;
  double h = 0.0;
  Cylinder cyl;
  double sup_sigma_x = 0.0;
  double sup_sigma_v = 0.0;
  std::vector<SliceRhs> slices;
  std::vector<EstimateSample> samples;
  double sup_ratio = 0.0;
  EstimateSample argsup;
  bool calibrated = true;
  double c = std::numeric_limits<double>::quiet_NaN();  // C* when calibrated, the fixed C otherwise
  bool pass = false;
};

/// Assembles LHS on Q_{R/2,T} (t > t0 - T) and the RHS per slice.
EstimateReport hsz_rhs(Theorem th, const EstimateContext& ectx);

struct CMode {
  bool calibrate = true;
  double c = 0.0;
  static CMode calibrated() { return {}; }
  static CMode fixed(double c) { return {false, c}; }
};

/// Calibrate: C* = sup LHS/RHS. Fixed: pass iff sup ratio <= C (relative slack 1e-12).
EstimateReport verify_estimate(const EstimateContext& ectx, EstimateReport report, CMode mode);

}  // namespace pmelab
