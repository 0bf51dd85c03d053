#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmelab/corollary.hpp"
#include "pmelab/cutoff.hpp"
#include "pmelab/estimates.hpp"
#include "pmelab/geometry_spec.hpp"
#include "pmelab/identities.hpp"
#include "pmelab/inequalities.hpp"
#include "pmelab/json_out.hpp"
#include "pmelab/liouville.hpp"
#include "pmelab/solver.hpp"

namespace pmelab {

struct SolverSection {
  bool present = false;
  InitialData initial;
  NonlinearitySpec nonlinearity = NonlinearitySpec::zero();
  SolverConfig cfg;
};

struct CertifySection {
  int samples_per_axis = 16;
  int time_samples = 4;
};

struct EstimateSection {
  std::string name;
  Theorem theorem = Theorem::BetaStatic;
  std::optional<double> beta;  // unset: midpoint of the admissible interval
  Cylinder cyl;
  std::string c_mode = "calibrate";  // calibrate | golden | fixed
  double c = 0.0;                    // fixed mode
  std::optional<double> k, h;        // unset: certified from the geometry
  std::vector<int> levels;           // refinement study; empty uses the scenario resolution
};

struct IdentitySection {
  std::string name;
  IdentityCase c;
};

struct InequalitySection {
  std::string name;
  InequalityKind kind = InequalityKind::SuperflowW;
  InequalityParams params;
  bool beta_midpoint = false;
  bool kappa_auto = false;
};

struct CorollarySection {
  std::string name;
  ClosedBound bound = ClosedBound::Decay;
  CorollaryParams params;
};

struct LiouvilleSection {
  std::string name;
  LiouvilleCase c;
  std::string expect;  // expected verdict; empty: anything but hypotheses-not-met
  std::optional<double> expect_violation;  // expected violation time
  double time_tol = 1e-8;
};

struct MatrixLemmaSection {
  std::string name;
  double a = 1.0, b = 0.0;
  int n = 2;
  int trials = 10000;
  int steps = 200;
};

struct CutoffSection {
  std::string name;
  CutoffParams params;
  int samples = 100;
};

struct MaxPointSection {
  std::string name;
  std::optional<double> beta;
  CutoffParams cutoff;
  Vec3 x0{0.0, 0.0, 0.0};
};

struct OperatorSection {
  std::string name;
  std::string op;
  std::string analytic_case;
  std::vector<int> levels{32, 64, 128};
  double floor = 1.9;
};

struct Tolerances {
  double inequality = 1e-6;
  double stability = 0.02;  // relative C* spread between the two finest levels
  double golden = 1e-6;     // relative drift allowed against frozen values
};

struct Scenario {
  std::string name;
  std::string source;  // file path
  std::string golden;  // golden file path, resolved against the scenario directory
  std::uint64_t hash = 0;
  std::uint64_t seed = 1;
  std::string output;
  GeometrySpec geometry;
  bool has_geometry = false;
  SolverSection solver;
  CertifySection certify;
  std::vector<EstimateSection> estimates;
  std::vector<IdentitySection> identities;
  std::vector<InequalitySection> inequalities;
  std::vector<CorollarySection> corollaries;
  std::vector<LiouvilleSection> liouville;
  std::vector<MatrixLemmaSection> matrix_lemma;
  std::vector<CutoffSection> cutoffs;
  std::vector<MaxPointSection> max_points;
  std::vector<OperatorSection> operators;
  Tolerances tol;

  std::size_t check_count() const;
  /// Checks that need the shared solver run.
  bool needs_solution() const;
};

/// Parses and validates; every failure is a ConfigError naming the field path and, for range rules, the rule.
Scenario parse_scenario(const Json& j, const std::string& source = "<memory>");
Scenario load_scenario(const std::string& path);

/// Catalog listing for the list-catalog command.
Json catalog_listing();

}  // namespace pmelab
