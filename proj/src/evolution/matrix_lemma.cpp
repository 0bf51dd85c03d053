#include "pmelab/matrix_lemma.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "pmelab/error.hpp"

namespace pmelab {

double matrix_lemma_closed_form(double a, double b, int n) { return (a + b) * (a + b) + (n - 1) * b * b; }

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct Ascent {
  double a, b;
  int n;
  std::vector<double> A, e, gA, ge, A2, e2;

  Ascent(double a_, double b_, int n_) : a(a_), b(b_), n(n_), A(n_ * n_), e(n_), gA(n_ * n_), ge(n_), A2(n_ * n_), e2(n_) {}

  // phi = a e^T A e + b tr A with |A|_F = |e| = 1
  double phi(const std::vector<double>& M, const std::vector<double>& x) const {
    double q = 0.0, tr = 0.0;
    for (int i = 0; i < n; ++i) {
      tr += M[i * n + i];
      for (int j = 0; j < n; ++j) q += x[i] * M[i * n + j] * x[j];
    }
    return a * q + b * tr;
  }

  static void normalise(std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    s = std::sqrt(s);
    for (double& v : x) v /= s;
  }

  double run(std::mt19937_64& rng, int steps) {
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) A[i * n + j] = A[j * n + i] = nd(rng);
    for (double& v : e) v = nd(rng);
    normalise(A);
    normalise(e);
    double f = phi(A, e);
    f *= f;
    double step = 0.5;
    for (int s = 0; s < steps; ++s) {
      const double ph = phi(A, e);
      // gradients of phi^2, projected to the tangent spaces of the two spheres
      double dotA = 0.0, dote = 0.0;
      for (int i = 0; i < n; ++i) {
        double Ae = 0.0;
        for (int j = 0; j < n; ++j) {
          gA[i * n + j] = 2.0 * ph * (a * e[i] * e[j] + (i == j ? b : 0.0));
          dotA += gA[i * n + j] * A[i * n + j];
          Ae += A[i * n + j] * e[j];
        }
        ge[i] = 4.0 * ph * a * Ae;
        dote += ge[i] * e[i];
      }
      for (int k = 0; k < n * n; ++k) gA[k] -= dotA * A[k];
      for (int i = 0; i < n; ++i) ge[i] -= dote * e[i];
      bool moved = false;
      for (int tries = 0; tries < 8 && !moved; ++tries) {
        for (int k = 0; k < n * n; ++k) A2[k] = A[k] + step * gA[k];
        for (int i = 0; i < n; ++i) e2[i] = e[i] + step * ge[i];
        normalise(A2);
        normalise(e2);
        double f2 = phi(A2, e2);
        f2 *= f2;
        if (f2 >= f) {
          A.swap(A2);
          e.swap(e2);
          f = f2;
          step *= 1.5;
          moved = true;
        } else {
          step *= 0.3;
        }
      }
      if (!moved) break;
    }
    return f;
  }
};

}  // namespace

MatrixLemmaResult matrix_lemma_bruteforce(double a, double b, int n, int trials, int steps, std::uint64_t seed,
                                          int threads) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "n must be >= 1");
  if (trials < 1 || steps < 0) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  MatrixLemmaResult res;
  res.closed_form = matrix_lemma_closed_form(a, b, n);
  res.trials = trials;
  res.steps = steps;
  int nt = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  nt = std::min(nt, trials);
  std::vector<double> best(nt, 0.0);
  auto worker = [&](int w) {
    Ascent asc(a, b, n);
    for (int t = w; t < trials; t += nt) {
      std::mt19937_64 rng(splitmix(seed * 0x100000001B3ULL + static_cast<std::uint64_t>(t)));
      best[w] = std::max(best[w], asc.run(rng, steps));
    }
  };
  if (nt == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < nt; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  res.empirical = *std::max_element(best.begin(), best.end());
  return res;
}

}  // namespace pmelab
