#pragma once

#include <array>

namespace pmelab {

constexpr int kMaxDim = 3;

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

Mat3 zero_matrix();
Mat3 identity_matrix(int n);

double dot(int n, const Vec3& a, const Vec3& b);
Vec3 mat_vec(int n, const Mat3& a, const Vec3& x);
/// a(x, y) = x^i a_ij y^j
double bilinear(int n, const Mat3& a, const Vec3& x, const Vec3& y);
Mat3 mat_mul(int n, const Mat3& a, const Mat3& b);
Mat3 transpose(int n, const Mat3& a);
Mat3 add(int n, const Mat3& a, const Mat3& b, double scale_b = 1.0);
Mat3 scaled(int n, const Mat3& a, double s);
double trace(int n, const Mat3& a);
double frobenius_norm(int n, const Mat3& a);
double max_abs_asymmetry(int n, const Mat3& a);

double determinant(int n, const Mat3& a);
/// Throws SingularMetric when |det| is tiny relative to the entries.
Mat3 inverse(int n, const Mat3& a);

/// Lower-triangular L with a = L L^T; returns false if a is not positive definite.
bool cholesky(int n, const Mat3& a, Mat3& lower);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi, ascending.
Vec3 symmetric_eigenvalues(int n, const Mat3& a);

/// Eigenvalues of a relative to the positive-definite g, ascending.
Vec3 generalized_eigenvalues(int n, const Mat3& a, const Mat3& g);
double min_generalized_eigenvalue(int n, const Mat3& a, const Mat3& g);
double max_generalized_eigenvalue(int n, const Mat3& a, const Mat3& g);

}  // namespace pmelab
