#pragma once

#include <cstddef>

#include <Eigen/Dense>

namespace trimpcr {

using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
///
/// rank_eps is relative: a singular value counts toward the rank when it
/// exceeds rank_eps times the largest singular value. orth_eps bounds the
/// entrywise deviation of B*B^T from the identity for an orthonormal basis.
/// converge_eps is the absolute loss change that ends an iteration.
struct Tolerances {
  double rank_eps = 1e-8;
  double orth_eps = 1e-9;
  double converge_eps = 1e-10;

  /// Throws std::invalid_argument unless every field is strictly positive.
  void validate() const;
};

/// k x m matrix whose rows are orthonormal (B * B^T = I_k).
class OrthonormalBasis {
 public:
  /// Checks orthonormality against orth_eps; throws NumericalError otherwise.
  static OrthonormalBasis from_rows(DenseMatrix rows, double orth_eps = 1e-9);

  std::size_t rank() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  const DenseMatrix& rows() const { return rows_; }

  /// Row-space projector B^T B (m x m).
  DenseMatrix projector() const;
  /// Coordinates of the rows of X in this basis: X * B^T.
  DenseMatrix coordinates(const DenseMatrix& X) const;

 private:
  explicit OrthonormalBasis(DenseMatrix rows) : rows_(std::move(rows)) {}
  DenseMatrix rows_;
};

struct RankKFactors {
  DenseMatrix U;    // rows x k, left factor scaled by singular values
  DenseMatrix B;    // k x cols, orthonormal rows
  double residual;  // ||M - U*B||_F
};

double frobenius_norm(const DenseMatrix& M);

/// Singular values in non-increasing order.
Vector singular_values(const DenseMatrix& M);

std::size_t numeric_rank(const DenseMatrix& M, const Tolerances& tol = {});

/// Truncated singular decomposition; throws std::invalid_argument unless
/// 1 <= k <= min(rows, cols).
RankKFactors best_rank_k(const DenseMatrix& M, std::size_t k);

/// Leading r right singular vectors of M as rows (r <= min(rows, cols)).
DenseMatrix top_right_singular_vectors(const DenseMatrix& M, std::size_t r);

/// Orthonormal rows spanning the row space of B. B must have full row rank.
OrthonormalBasis orthonormalize(const DenseMatrix& B, const Tolerances& tol = {});

/// Minimum-norm minimizer of ||A x - b||_2.
Vector least_squares(const DenseMatrix& A, const Vector& b, const Tolerances& tol = {});

/// Column-wise minimum-norm least squares for a block of right-hand sides.
DenseMatrix least_squares(const DenseMatrix& A, const DenseMatrix& B,
                          const Tolerances& tol = {});

/// Orthonormal rows for the numerical row space of B (rank-revealing; may
/// return fewer rows than B has).
DenseMatrix orthonormal_row_space(const DenseMatrix& B, const Tolerances& tol = {});

/// Extends the orthonormal rows Q (r x m) to k >= r orthonormal rows.
DenseMatrix complete_orthonormal_rows(const DenseMatrix& Q, std::size_t k);

/// Throws InputError naming `what` if M holds a NaN or infinity.
void require_finite(const DenseMatrix& M, const char* what);

}  // namespace trimpcr
