#pragma once

#include <string>
#include <vector>

#include "pmelab/corollary.hpp"
#include "pmelab/history.hpp"
#include "pmelab/identities.hpp"

namespace pmelab {

/// superflow-w: L[w] against the kappa bound with the <grad v, grad w> drift.
/// shifted-w: L[w] - eps <grad v, grad w> against the Gamma(beta, eps) bound.
/// optimal-w: the shifted bound at beta = -1/(p-1), eps = p after the flow substitution.
/// h-bound: L[H] - eps <grad v, grad H> against the Omega(q, eps) bound.
enum class InequalityKind { SuperflowW, ShiftedW, OptimalW, HBound };

std::string inequality_tag(InequalityKind kind);
InequalityKind parse_inequality(const std::string& tag);

struct InequalityParams {
  double p = 2.0;
  double beta = -1.0;  // ignored by optimal-w
  double eps = 0.0;    // ignored by superflow-w and optimal-w
  double kappa = 0.0;
  double s = 2.0;
  double q = -1.0;
  Zeta zeta = Zeta::one();
  GammaAux gamma = GammaAux::zero();
  double tol = 1e-6;
};

/// Pointwise slack rhs - lhs and max(|lhs|, |rhs|, 1) for one slice.
struct SlackField {
  ScalarField slack;
  ScalarField scale;
};

/// Requires finite m. Throws HypothesisViolated when the flow margin with kappa is negative at a node.
SlackField inequality_slack(InequalityKind kind, const GeometryContext& ctx, const PressureSlice& s,
                            const InequalityParams& params);

/// Slack over interior nodes of every slice; pass when the scaled slack stays above -tol.
ResidualReport check_inequality(InequalityKind kind, const GeometryContext& ctx,
                                const std::vector<PressureSlice>& slices, const InequalityParams& params);

/// Smallest kappa >= 0 with 1/2 d_t g + (p-1) v Ric_f^m >= -kappa g on every slice.
double minimal_kappa(const GeometryContext& ctx, const std::vector<PressureSlice>& slices, double p);

}  // namespace pmelab
