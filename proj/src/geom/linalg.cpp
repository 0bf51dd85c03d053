#include "pmelab/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "pmelab/error.hpp"

namespace pmelab {

Mat3 zero_matrix() {
  Mat3 m{};
  for (auto& row : m) row.fill(0.0);
  return m;
}

Mat3 identity_matrix(int n) {
  Mat3 m = zero_matrix();
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

double dot(int n, const Vec3& a, const Vec3& b) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

Vec3 mat_vec(int n, const Mat3& a, const Vec3& x) {
  Vec3 y{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
  return y;
}

double bilinear(int n, const Mat3& a, const Vec3& x, const Vec3& y) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += x[i] * a[i][j] * y[j];
  return s;
}

Mat3 mat_mul(int n, const Mat3& a, const Mat3& b) {
  Mat3 c = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

Mat3 transpose(int n, const Mat3& a) {
  Mat3 t = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t[i][j] = a[j][i];
  return t;
}

Mat3 add(int n, const Mat3& a, const Mat3& b, double scale_b) {
  Mat3 c = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i][j] = a[i][j] + scale_b * b[i][j];
  return c;
}

Mat3 scaled(int n, const Mat3& a, double s) {
  Mat3 c = zero_matrix();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c[i][j] = s * a[i][j];
  return c;
}

double trace(int n, const Mat3& a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += a[i][i];
  return s;
}

double frobenius_norm(int n, const Mat3& a) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a[i][j] * a[i][j];
  return std::sqrt(s);
}

double max_abs_asymmetry(int n, const Mat3& a) {
  double d = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) d = std::max(d, std::abs(a[i][j] - a[j][i]));
  return d;
}

double determinant(int n, const Mat3& a) {
  switch (n) {
    case 1: return a[0][0];
    case 2: return a[0][0] * a[1][1] - a[0][1] * a[1][0];
    case 3:
      return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
             a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
             a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    default: throw Error(ErrorCode::InvalidArgument, "dimension must be 1..3");
  }
}

Mat3 inverse(int n, const Mat3& a) {
  const double det = determinant(n, a);
  double scale = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[i][j]));
  if (!(std::abs(det) > 1e-300) || std::abs(det) <= 1e-14 * std::pow(scale, n))
    throw Error(ErrorCode::SingularMetric, "matrix not invertible");
  Mat3 inv = zero_matrix();
  if (n == 1) {
    inv[0][0] = 1.0 / det;
  } else if (n == 2) {
    inv[0][0] = a[1][1] / det;
    inv[1][1] = a[0][0] / det;
    inv[0][1] = -a[0][1] / det;
    inv[1][0] = -a[1][0] / det;
  } else {
    inv[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / det;
    inv[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / det;
    inv[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / det;
    inv[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / det;
    inv[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / det;
    inv[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / det;
    inv[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / det;
    inv[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / det;
    inv[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / det;
  }
  return inv;
}

bool cholesky(int n, const Mat3& a, Mat3& lower) {
  lower = zero_matrix();
  for (int j = 0; j < n; ++j) {
    double d = a[j][j];
    for (int k = 0; k < j; ++k) d -= lower[j][k] * lower[j][k];
    if (!(d > 0.0)) return false;
    lower[j][j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= lower[i][k] * lower[j][k];
      lower[i][j] = s / lower[j][j];
    }
  }
  return true;
}

Vec3 symmetric_eigenvalues(int n, const Mat3& input) {
  Mat3 a = input;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a[i][j] = a[j][i] = 0.5 * (input[i][j] + input[j][i]);
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-300) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vec3 ev{0.0, 0.0, 0.0};
  for (int i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.begin() + n);
  return ev;
}

Vec3 generalized_eigenvalues(int n, const Mat3& a, const Mat3& g) {
  Mat3 l;
  if (!cholesky(n, g, l)) throw Error(ErrorCode::SingularMetric, "metric not positive definite");
  // whiten: W = L^{-1} a L^{-T}
  const Mat3 linv = inverse(n, l);
  const Mat3 w = mat_mul(n, mat_mul(n, linv, a), transpose(n, linv));
  return symmetric_eigenvalues(n, w);
}

double min_generalized_eigenvalue(int n, const Mat3& a, const Mat3& g) {
  return generalized_eigenvalues(n, a, g)[0];
}

double max_generalized_eigenvalue(int n, const Mat3& a, const Mat3& g) {
  return generalized_eigenvalues(n, a, g)[n - 1];
}

}  // namespace pmelab
