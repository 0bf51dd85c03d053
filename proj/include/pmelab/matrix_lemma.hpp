#pragma once

#include <cstdint>

namespace pmelab {

/// (a+b)^2 + (n-1) b^2
double matrix_lemma_closed_form(double a, double b, int n);

struct MatrixLemmaResult {
  double empirical = 0.0;
  double closed_form = 0.0;
  int trials = 0;
  int steps = 0;
};

/// Maximises [(aA + b trA I)(e,e) / |A|]^2 over symmetric A and unit e by random restarts
/// followed by projected gradient ascent; each trial has its own seed derived from `seed`.
MatrixLemmaResult matrix_lemma_bruteforce(double a, double b, int n, int trials = 10000, int steps = 200,
                                          std::uint64_t seed = 1, int threads = 0);

}  // namespace pmelab
