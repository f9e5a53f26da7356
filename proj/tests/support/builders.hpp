#pragma once

#include <cstdint>
#include <random>

#include "oracles.hpp"

namespace oracle {

using Engine = std::mt19937_64;

Mat gaussian(Eigen::Index rows, Eigen::Index cols, Engine& eng);

/// Unit vector orthogonal to the row space of M (requires rank(M) < cols).
Vec orthogonal_direction(const Mat& M, Engine& eng);

struct NoiseFreeInstance {
  Mat X_star;  // n x m, rank k
  Mat X;       // X_star rows followed by n1 adversarial rows
  int n = 0;
  int n1 = 0;
  int k = 0;
  int ms = 0;  // MS_{k-1}(X_star) from the bitmask oracle
};

/// X_star has `degenerate` rows inside a common (k-1)-dimensional subspace
/// and the rest generic in a k-dimensional one. The adversarial rows are the
/// worst case: they lie in span(rows of a largest rank-(k-1) subset) plus a
/// direction orthogonal to X_star, so that subset and the adversarial rows
/// together look like a valid rank-k matrix. Returns false when the draw
/// does not have rank k.
bool build_noise_free(int k, int m, int n, int degenerate, int n1, Engine& eng,
                      NoiseFreeInstance& out);

struct NoisyInstance {
  Mat X_star;
  Mat X0;  // X_star + N with N orthogonal to X_star on both sides
  Mat X;   // X0 rows followed by adversarial rows
  int n = 0;
  int n1 = 0;
  int k = 0;
};

/// `eta` is ||N||_F / ||X_star||_F. With `worst_case` the adversarial rows
/// follow the construction above, otherwise they are Gaussian.
NoisyInstance build_noisy(int k, int m, int n, int n1, double eta, bool worst_case, Engine& eng);

}  // namespace oracle
