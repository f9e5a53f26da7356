#pragma once

#include <cstddef>
#include <string_view>

#include "trimpcr/matrix_core.hpp"

namespace trimpcr {

// Brute-force theory quantities for small instances. Every routine refuses
// (CapExceededError) instead of approximating once the row count passes the cap.

enum class SrMode {
  /// Subsets whose best rank-k basis spans X_star are skipped.
  skip,
  /// Such subsets are re-solved with the k-th singular direction swapped for
  /// the (k+1)-th, the cheapest basis change that leaves span(X_star).
  perturb,
};

SrMode parse_sr_mode(std::string_view text);
std::string_view to_string(SrMode mode);

struct OracleConfig {
  std::size_t enumeration_cap = 16;
  SrMode sr_mode = SrMode::skip;
  Tolerances tol;
};

struct RecoverabilityVerdict {
  std::size_t ms_k_minus_1 = 0;
  double nr = 0.0;
  double sr = 0.0;  // +infinity when no subset is admissible
  bool solvable = false;
};

/// Largest number of rows of X_star lying in a common rank-(k-1) subspace.
std::size_t max_subspace_cardinality(const DenseMatrix& X_star, std::size_t k,
                                     const OracleConfig& cfg = {});

/// Distance from X0 to the nearest matrix of rank at most k.
double noise_residual(const DenseMatrix& X0, std::size_t k);

/// Smallest rank-k fit residual of an (n - n1)-row submatrix of X0 over bases
/// that do not span X_star.
double submatrix_residual(const DenseMatrix& X0, const DenseMatrix& X_star, std::size_t k,
                          std::size_t n1, const OracleConfig& cfg = {});

RecoverabilityVerdict recoverability(const DenseMatrix& X0, const DenseMatrix& X_star,
                                     std::size_t k, std::size_t n1, const OracleConfig& cfg = {});

/// True when the row space of `basis_rows` (orthonormal) contains every row
/// of X_star up to rank_eps * ||X_star||_F.
bool spans(const DenseMatrix& basis_rows, const DenseMatrix& X_star, const Tolerances& tol);

}  // namespace trimpcr
