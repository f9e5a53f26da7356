#include "trimpcr/matrix_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "trimpcr/errors.hpp"

namespace trimpcr {

void Tolerances::validate() const {
  if (!(rank_eps > 0.0) || !(orth_eps > 0.0) || !(converge_eps > 0.0)) {
    throw std::invalid_argument("tolerances must be strictly positive");
  }
}

OrthonormalBasis OrthonormalBasis::from_rows(DenseMatrix rows, double orth_eps) {
  if (rows.rows() > rows.cols()) {
    throw NumericalError("orthonormal basis needs k <= m, got k=" + std::to_string(rows.rows()) +
                         " m=" + std::to_string(rows.cols()));
  }
  require_finite(rows, "basis");
  const DenseMatrix gram = rows * rows.transpose();
  const DenseMatrix eye = DenseMatrix::Identity(rows.rows(), rows.rows());
  if (rows.rows() > 0 && (gram - eye).cwiseAbs().maxCoeff() > orth_eps) {
    throw NumericalError("basis rows are not orthonormal");
  }
  return OrthonormalBasis(std::move(rows));
}

DenseMatrix OrthonormalBasis::projector() const { return rows_.transpose() * rows_; }

DenseMatrix OrthonormalBasis::coordinates(const DenseMatrix& X) const {
  if (X.cols() != rows_.cols()) {
    throw std::invalid_argument("coordinates: column count does not match basis dimension");
  }
  return X * rows_.transpose();
}

namespace {

// One-sided Jacobi is faster and more accurate on the small, often exactly
// low-rank blocks the recovery loops produce; divide and conquer wins on large ones.
constexpr Eigen::Index kJacobiLimit = 96;

template <class Use>
auto with_svd(const DenseMatrix& M, unsigned options, Use&& use) {
  if (std::min(M.rows(), M.cols()) <= kJacobiLimit) {
    return use(Eigen::JacobiSVD<DenseMatrix>(M, options));
  }
  return use(Eigen::BDCSVD<DenseMatrix>(M, options));
}

}  // namespace

double frobenius_norm(const DenseMatrix& M) { return M.norm(); }

Vector singular_values(const DenseMatrix& M) {
  if (M.size() == 0) return Vector();
  return with_svd(M, 0, [](const auto& svd) -> Vector { return svd.singularValues(); });
}

std::size_t numeric_rank(const DenseMatrix& M, const Tolerances& tol) {
  const Vector s = singular_values(M);
  if (s.size() == 0 || s(0) <= 0.0) return 0;
  const double cutoff = tol.rank_eps * s(0);
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff) ++r;
  }
  return r;
}

RankKFactors best_rank_k(const DenseMatrix& M, std::size_t k) {
  const auto limit = static_cast<std::size_t>(std::min(M.rows(), M.cols()));
  if (k < 1 || k > limit) {
    throw std::invalid_argument("best_rank_k: k=" + std::to_string(k) + " outside [1, " +
                                std::to_string(limit) + "]");
  }
  const auto kk = static_cast<Eigen::Index>(k);
  return with_svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV, [kk](const auto& svd) {
    const Vector& s = svd.singularValues();
    RankKFactors out;
    out.U = svd.matrixU().leftCols(kk) * s.head(kk).asDiagonal();
    out.B = svd.matrixV().leftCols(kk).transpose();
    // Eckart-Young: the residual is carried entirely by the discarded values.
    out.residual = s.tail(s.size() - kk).norm();
    return out;
  });
}

DenseMatrix top_right_singular_vectors(const DenseMatrix& M, std::size_t r) {
  const auto limit = static_cast<std::size_t>(std::min(M.rows(), M.cols()));
  if (r > limit) throw std::invalid_argument("top_right_singular_vectors: r exceeds min(rows, cols)");
  if (r == 0) return DenseMatrix(0, M.cols());
  const auto rr = static_cast<Eigen::Index>(r);
  return with_svd(M, Eigen::ComputeThinV, [rr](const auto& svd) -> DenseMatrix {
    return svd.matrixV().leftCols(rr).transpose();
  });
}

OrthonormalBasis orthonormalize(const DenseMatrix& B, const Tolerances& tol) {
  if (B.rows() == 0 || B.rows() > B.cols()) {
    throw NumericalError("orthonormalize: need 1 <= k <= m");
  }
  require_finite(B, "orthonormalize input");
  if (numeric_rank(B, tol) != static_cast<std::size_t>(B.rows())) {
    throw NumericalError("orthonormalize: input rows are rank deficient");
  }
  Eigen::HouseholderQR<DenseMatrix> qr(B.transpose());
  const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(B.cols(), B.rows());
  return OrthonormalBasis::from_rows(q.transpose(), tol.orth_eps);
}

namespace {

Eigen::CompleteOrthogonalDecomposition<DenseMatrix> decompose(const DenseMatrix& A,
                                                              const Tolerances& tol) {
  Eigen::CompleteOrthogonalDecomposition<DenseMatrix> cod;
  cod.setThreshold(tol.rank_eps);
  cod.compute(A);
  return cod;
}

}  // namespace

Vector least_squares(const DenseMatrix& A, const Vector& b, const Tolerances& tol) {
  if (A.rows() != b.size()) {
    throw DimensionError("least_squares: A has " + std::to_string(A.rows()) +
                         " rows but b has length " + std::to_string(b.size()));
  }
  if (A.cols() == 0) return Vector();
  return decompose(A, tol).solve(b);
}

DenseMatrix least_squares(const DenseMatrix& A, const DenseMatrix& B, const Tolerances& tol) {
  if (A.rows() != B.rows()) {
    throw DimensionError("least_squares: row counts differ (" + std::to_string(A.rows()) +
                         " vs " + std::to_string(B.rows()) + ")");
  }
  if (A.cols() == 0) return DenseMatrix(0, B.cols());
  return decompose(A, tol).solve(B);
}

DenseMatrix orthonormal_row_space(const DenseMatrix& B, const Tolerances& tol) {
  if (B.size() == 0) return DenseMatrix(0, B.cols());
  return with_svd(B, Eigen::ComputeThinV, [&tol](const auto& svd) -> DenseMatrix {
    const Vector& s = svd.singularValues();
    Eigen::Index r = 0;
    if (s(0) > 0.0) {
      while (r < s.size() && s(r) > tol.rank_eps * s(0)) ++r;
    }
    return svd.matrixV().leftCols(r).transpose();
  });
}

DenseMatrix complete_orthonormal_rows(const DenseMatrix& Q, std::size_t k) {
  const auto r = static_cast<std::size_t>(Q.rows());
  const auto m = static_cast<std::size_t>(Q.cols());
  if (k < r || k > m) {
    throw std::invalid_argument("complete_orthonormal_rows: need rows <= k <= m");
  }
  if (k == r) return Q;
  DenseMatrix out(k, m);
  out.topRows(r) = Q;
  if (r == 0) {
    out = DenseMatrix::Identity(k, m);
    return out;
  }
  // The trailing columns of a full QR of Q^T span the orthogonal complement.
  Eigen::HouseholderQR<DenseMatrix> qr(Q.transpose());
  const DenseMatrix full = qr.householderQ();
  out.bottomRows(k - r) = full.middleCols(r, k - r).transpose();
  return out;
}

void require_finite(const DenseMatrix& M, const char* what) {
  if (!M.allFinite()) {
    throw InputError(std::string(what) + " contains NaN or infinite entries");
  }
}

}  // namespace trimpcr
