#include "pmelab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

double Coefficient::value(const Vec3& x, double) const { return c0 + amp * std::sin(k * x[axis]); }

Vec3 Coefficient::gradient(const Vec3& x, double) const {
  Vec3 g{0.0, 0.0, 0.0};
  g[axis] = amp * k * std::cos(k * x[axis]);
  return g;
}

NonlinearitySpec NonlinearitySpec::zero() { return NonlinearitySpec{}; }

NonlinearitySpec NonlinearitySpec::constant(double a) {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::Constant;
  s.a_ = a;
  return s;
}

NonlinearitySpec NonlinearitySpec::log(const Coefficient& a) {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::Log;
  s.log_coeff_ = a;
  return s;
}

NonlinearitySpec NonlinearitySpec::power_sum(const std::vector<PowerTerm>& a_terms,
                                             const std::vector<PowerTerm>& b_terms) {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::PowerSum;
  for (const auto& t : a_terms) {
    if (t.exponent < 0.0) throw Error(ErrorCode::InvalidArgument, "power-sum exponents alpha_j must be >= 0");
    s.terms_.push_back(t);
  }
  for (const auto& t : b_terms) {
    if (t.exponent > 0.0) throw Error(ErrorCode::InvalidArgument, "power-sum exponents beta_j must be <= 0");
    s.terms_.push_back(t);
  }
  return s;
}

NonlinearitySpec NonlinearitySpec::yamabe(const Coefficient& a, double alpha, const Coefficient& b, double beta) {
  NonlinearitySpec s;
  s.kind_ = NonlinearityKind::Yamabe;
  s.terms_ = {PowerTerm{a, alpha}, PowerTerm{b, beta}};
  return s;
}

std::string NonlinearitySpec::tag() const {
  switch (kind_) {
    case NonlinearityKind::Zero: return "zero";
    case NonlinearityKind::Constant: return "constant";
    case NonlinearityKind::Log: return "log";
    case NonlinearityKind::PowerSum: return "power-sum";
    case NonlinearityKind::Yamabe: return "yamabe";
  }
  return "zero";
}

double NonlinearitySpec::value(double t, const Vec3& x, double u) const {
  switch (kind_) {
    case NonlinearityKind::Zero: return 0.0;
    case NonlinearityKind::Constant: return a_;
    case NonlinearityKind::Log: return log_coeff_.value(x, t) * u * std::log(std::max(u, floor));
    default: {
      double s = 0.0;
      for (const auto& term : terms_) s += term.coeff.value(x, t) * std::pow(u, term.exponent);
      return s;
    }
  }
}

double NonlinearitySpec::du(double t, const Vec3& x, double u) const {
  switch (kind_) {
    case NonlinearityKind::Zero:
    case NonlinearityKind::Constant: return 0.0;
    case NonlinearityKind::Log: return log_coeff_.value(x, t) * (std::log(std::max(u, floor)) + 1.0);
    default: {
      double s = 0.0;
      for (const auto& term : terms_)
        if (term.exponent != 0.0) s += term.coeff.value(x, t) * term.exponent * std::pow(u, term.exponent - 1.0);
      return s;
    }
  }
}

Vec3 NonlinearitySpec::dx(double t, const Vec3& x, double u) const {
  Vec3 g{0.0, 0.0, 0.0};
  auto acc = [&g](const Vec3& c, double w) {
    for (int i = 0; i < 3; ++i) g[i] += w * c[i];
  };
  switch (kind_) {
    case NonlinearityKind::Zero:
    case NonlinearityKind::Constant: break;
    case NonlinearityKind::Log: acc(log_coeff_.gradient(x, t), u * std::log(std::max(u, floor))); break;
    default:
      for (const auto& term : terms_) acc(term.coeff.gradient(x, t), std::pow(u, term.exponent));
  }
  return g;
}

bool NonlinearitySpec::spatially_constant() const {
  switch (kind_) {
    case NonlinearityKind::Zero:
    case NonlinearityKind::Constant: return true;
    case NonlinearityKind::Log: return log_coeff_.spatially_constant();
    default:
      return std::all_of(terms_.begin(), terms_.end(), [](const PowerTerm& t) { return t.coeff.spatially_constant(); });
  }
}

void NonlinearitySpec::check_consistency(int n, double rel_tol) const {
  const double us[] = {0.05, 0.3, 1.0, 2.5, 7.0};
  const double xs[] = {0.0, 0.7, 2.1};
  for (double u : us)
    for (double xv : xs) {
      Vec3 x{0.0, 0.0, 0.0};
      for (int i = 0; i < n; ++i) x[i] = xv + 0.3 * i;
      const double h = 1e-4 * u;
      const double fd = (value(0.0, x, u - 2 * h) - 8 * value(0.0, x, u - h) + 8 * value(0.0, x, u + h) -
                         value(0.0, x, u + 2 * h)) /
                        (12 * h);
      const double an = du(0.0, x, u);
      if (std::abs(fd - an) > rel_tol * std::max({1.0, std::abs(an), std::abs(fd)}))
        throw Error(ErrorCode::InvalidArgument, "closed-form d_u N disagrees with a difference quotient for '" +
                                                    tag() + "'");
    }
}

}  // namespace pmelab
