#pragma once

#include <limits>
#include <string>
#include <vector>

#include "pmelab/corollary.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/history.hpp"

namespace pmelab {

/// pressure-evolution | w-evolution | product-rule | h-functional | shifted-w
enum class Lemma { PressureEvolution, WEvolution, ProductRule, HFunctional, ShiftedW };

std::string lemma_tag(Lemma lemma);
Lemma parse_lemma(const std::string& tag);
/// 1.9 for second-derivative assemblies, 1.5 when a third-derivative composition enters.
double order_floor(Lemma lemma);

struct IdentityCase {
  Lemma lemma = Lemma::PressureEvolution;
  GeometrySpec geometry;
  std::string pressure = "decaying-sine";  // v, or u for the product rule
  std::string second = "cosine-static";    // w for the product rule
  double coefficient_v = 3.0;              // v in the operator for the product rule
  double p = 2.0;
  double beta = -1.0;
  double eps = 0.0;
  double s = 2.0;
  double q = -1.0;
  Zeta zeta = Zeta::one();
  GammaAux gamma = GammaAux::zero();
  double t = 0.5;
  std::vector<int> levels{64, 128, 256};

  /// Throws InvalidArgument or DegenerateDimension for parameters outside the lemma's range.
  void validate() const;
};

struct ResidualReport {
  std::string lemma;
  std::vector<int> levels;
  std::vector<double> residual_max;  // max |lhs - rhs| over interior nodes
  std::vector<double> scaled_max;    // max |lhs - rhs| / max(|lhs|, |rhs|, 1)
  std::vector<double> orders;
  double observed_order = 0.0;
  double order_floor = 0.0;
  /// Inequality mode only.
  double slack_min = std::numeric_limits<double>::infinity();
  double scaled_slack_min = std::numeric_limits<double>::infinity();
  Vec3 argmin_x{0.0, 0.0, 0.0};
  double argmin_t = 0.0;
  bool exact = false;  // every residual below 1e-10 relative to the scale
  bool pass = false;
};

/// lhs - rhs and max(|lhs|, |rhs|, 1) at every node for one resolution.
struct IdentityResidual {
  ScalarField residual;
  ScalarField scale;
};
IdentityResidual identity_residual(const IdentityCase& c, int resolution);

ResidualReport check_identity(const IdentityCase& c);
ResidualReport check_pressure_evolution(IdentityCase c);
ResidualReport check_w_evolution(IdentityCase c);
ResidualReport check_product_rule(IdentityCase c);
ResidualReport check_H_functional(IdentityCase c);
ResidualReport check_shifted_w(IdentityCase c);

}  // namespace pmelab
