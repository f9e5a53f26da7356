#pragma once

#include <cstddef>
#include <cstdint>

#include "trimpcr/index_set.hpp"
#include "trimpcr/matrix_core.hpp"
#include "trimpcr/random.hpp"

namespace trimpcr {

struct RecoveryOptions {
  std::size_t restarts = 8;
  std::size_t max_outer_iters = 200;
  std::uint64_t seed = kDefaultSeed;
  Tolerances tol;
  /// Row limit for the enumerating variants.
  std::size_t enumeration_cap = 16;

  void validate() const;
};

struct RecoveryResult {
  OrthonormalBasis basis;
  IndexSet kept;
  DenseMatrix U_full;     // X * basis^T, every row
  double residual = 0.0;  // ||X^kept - U^kept * basis||_F
  bool converged = true;
  /// Dimension actually needed by the kept rows; basis rows past it are an
  /// arbitrary orthonormal completion.
  std::size_t effective_rank = 0;
};

struct NoiseFreeRecovery {
  RecoveryResult result;
  /// Number of different row spaces among all size-n subsets of rank k.
  std::size_t distinct_spans = 0;
};

/// Searches the size-n row subsets for one of numeric rank k and returns the
/// first in lexicographic order. Throws NumericalError when none exists.
NoiseFreeRecovery recover_noise_free(const DenseMatrix& X, std::size_t n, std::size_t k,
                                     const RecoveryOptions& opts = {});

/// Exhaustive minimizer of the best rank-k residual over size-n row subsets.
RecoveryResult recover_exact(const DenseMatrix& X, std::size_t n, std::size_t k,
                             const RecoveryOptions& opts = {});

/// Alternating minimization of the trimmed factorization objective: fit U on
/// every row, then fit B on the n rows with the smallest residuals.
RecoveryResult recover_efficient(const DenseMatrix& X, std::size_t n, std::size_t k,
                                 const RecoveryOptions& opts = {});

/// Fraction of the adversarial rows left out of result.kept (1 when there
/// are none).
double identification_rate(const RecoveryResult& result, const IndexSet& true_adversarial);

/// ||A^T A - B^T B||_F; zero exactly when the row spaces coincide.
double span_distance(const OrthonormalBasis& a, const OrthonormalBasis& b);

}  // namespace trimpcr
