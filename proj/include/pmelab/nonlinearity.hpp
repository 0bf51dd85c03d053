#pragma once

#include <string>
#include <vector>

#include "pmelab/linalg.hpp"

namespace pmelab {

/// c0 + amp * sin(k * x_axis); the (t, x) coefficient of a nonlinearity term.
struct Coefficient {
  double c0 = 0.0;
  double amp = 0.0;
  int axis = 0;
  double k = 1.0;

  double value(const Vec3& x, double t) const;
  Vec3 gradient(const Vec3& x, double t) const;
  bool spatially_constant() const { return amp == 0.0; }
  static Coefficient constant(double c) { return Coefficient{c, 0.0, 0, 1.0}; }
};

struct PowerTerm {
  Coefficient coeff;
  double exponent = 0.0;
};

enum class NonlinearityKind { Zero, Constant, Log, PowerSum, Yamabe };

/// N(t, x, u) with closed-form d_u N and spatial gradient at fixed u.
class NonlinearitySpec {
 public:
  static NonlinearitySpec zero();
  static NonlinearitySpec constant(double a);
  /// A(t, x) u log u
  static NonlinearitySpec log(const Coefficient& a);
  /// sum_j A_j u^{alpha_j} + sum_j B_j u^{beta_j} with alpha_j >= 0, beta_j <= 0.
  static NonlinearitySpec power_sum(const std::vector<PowerTerm>& a_terms, const std::vector<PowerTerm>& b_terms);
  /// A u^alpha + B u^beta
  static NonlinearitySpec yamabe(const Coefficient& a, double alpha, const Coefficient& b, double beta);

  NonlinearityKind kind() const { return kind_; }
  std::string tag() const;
  double value(double t, const Vec3& x, double u) const;
  double du(double t, const Vec3& x, double u) const;
  Vec3 dx(double t, const Vec3& x, double u) const;
  bool spatially_constant() const;
  bool is_zero() const { return kind_ == NonlinearityKind::Zero; }
  const std::vector<PowerTerm>& terms() const { return terms_; }
  double constant_value() const { return a_; }

  /// Compares du against a central difference at a set of (t, x, u); throws InvalidArgument on mismatch.
  void check_consistency(int n, double rel_tol = 1e-6) const;

  /// Positivity floor applied inside log u.
  double floor = 1e-10;

 private:
  NonlinearityKind kind_ = NonlinearityKind::Zero;
  double a_ = 0.0;
  Coefficient log_coeff_;
  std::vector<PowerTerm> terms_;
};

}  // namespace pmelab
