#pragma once

#include <string>
#include <vector>

namespace pmelab {

struct DiffReport {
  std::string op;
  std::string analytic_case;
  std::vector<int> levels;
  std::vector<double> error_max;
  std::vector<double> error_l2;  // weighted by e^{-f} sqrt|g|
  std::vector<double> orders;    // log2(e_coarse / e_fine) per doubling
  double observed_order = 0.0;   // smallest of the orders
  bool exact = false;            // every error below 1e-12
};

/// Observed orders across consecutive doublings; +inf when both errors sit below the floor.
std::vector<double> observed_orders(const std::vector<double>& errors, double floor = 1e-12);

/// Operators: gradient, f_laplacian, hessian, bochner_residual.
/// Cases: sin, sin-weighted, sin-2d, linear, quadratic, sphere-cos.
DiffReport convergence_order(const std::string& op, const std::string& analytic_case, const std::vector<int>& levels);

std::vector<std::string> convergence_cases();

}  // namespace pmelab
