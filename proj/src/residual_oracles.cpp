#include "trimpcr/residual_oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "trimpcr/combinations.hpp"
#include "trimpcr/errors.hpp"
#include "trimpcr/index_set.hpp"

namespace trimpcr {

std::uint64_t binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t out = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    const std::uint64_t num = n - r + i;
    if (out > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out = out * num / i;
  }
  return out;
}

SrMode parse_sr_mode(std::string_view text) {
  if (text == "skip") return SrMode::skip;
  if (text == "perturb") return SrMode::perturb;
  throw std::invalid_argument("unknown sr mode '" + std::string(text) + "'");
}

std::string_view to_string(SrMode mode) { return mode == SrMode::skip ? "skip" : "perturb"; }

namespace {

void check_cap(std::size_t rows, const OracleConfig& cfg, const char* what) {
  if (rows > cfg.enumeration_cap) {
    throw CapExceededError(std::string(what) + ": " + std::to_string(rows) +
                           " rows exceed the enumeration cap of " +
                           std::to_string(cfg.enumeration_cap));
  }
}

DenseMatrix gather(const DenseMatrix& M, const std::vector<std::size_t>& rows) {
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = M.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace

bool spans(const DenseMatrix& basis_rows, const DenseMatrix& X_star, const Tolerances& tol) {
  const DenseMatrix off = X_star - (X_star * basis_rows.transpose()) * basis_rows;
  return off.norm() <= tol.rank_eps * X_star.norm();
}

std::size_t max_subspace_cardinality(const DenseMatrix& X_star, std::size_t k,
                                     const OracleConfig& cfg) {
  if (k < 1) throw std::invalid_argument("max_subspace_cardinality: k must be >= 1");
  const auto n = static_cast<std::size_t>(X_star.rows());
  check_cap(n, cfg, "max_subspace_cardinality");
  for (std::size_t size = n; size > 0; --size) {
    bool found = false;
    for_each_combination(n, size, [&](const std::vector<std::size_t>& idx) {
      found = numeric_rank(gather(X_star, idx), cfg.tol) + 1 <= k;
      return !found;
    });
    if (found) return size;
  }
  return 0;
}

double noise_residual(const DenseMatrix& X0, std::size_t k) { return best_rank_k(X0, k).residual; }

double submatrix_residual(const DenseMatrix& X0, const DenseMatrix& X_star, std::size_t k,
                          std::size_t n1, const OracleConfig& cfg) {
  if (X0.rows() != X_star.rows() || X0.cols() != X_star.cols()) {
    throw DimensionError("submatrix_residual: X0 and X_star differ in shape");
  }
  const auto n = static_cast<std::size_t>(X0.rows());
  const auto m = static_cast<std::size_t>(X0.cols());
  if (k < 1 || k > m) throw std::invalid_argument("submatrix_residual: k outside [1, m]");
  if (n1 >= n) throw std::invalid_argument("submatrix_residual: n1 must be < n");
  check_cap(n, cfg, "submatrix_residual");

  const auto kk = static_cast<Eigen::Index>(k);
  double best = std::numeric_limits<double>::infinity();
  for_each_combination(n, n - n1, [&](const std::vector<std::size_t>& idx) {
    // A k = m basis is the whole space and always spans X_star.
    if (k == m) return true;
    const DenseMatrix sub = gather(X0, idx);
    Eigen::JacobiSVD<DenseMatrix> svd(sub, Eigen::ComputeFullV);
    Vector s = Vector::Zero(static_cast<Eigen::Index>(m));
    s.head(svd.singularValues().size()) = svd.singularValues();
    const double tail = s.tail(static_cast<Eigen::Index>(m) - kk).norm();
    const double sk = s(kk - 1);
    const double sk1 = s(kk);

    // With s_k = s_{k+1} the optimal basis is not unique and can be rotated
    // off span(X_star) at no cost.
    if (sk - sk1 <= cfg.tol.rank_eps * s(0)) {
      best = std::min(best, tail);
      return true;
    }
    DenseMatrix basis = svd.matrixV().leftCols(kk).transpose();
    if (!spans(basis, X_star, cfg.tol)) {
      best = std::min(best, tail);
      return true;
    }
    if (cfg.sr_mode == SrMode::perturb) {
      basis.row(kk - 1) = svd.matrixV().col(kk).transpose();
      if (!spans(basis, X_star, cfg.tol)) {
        best = std::min(best, std::sqrt(tail * tail + sk * sk - sk1 * sk1));
      }
    }
    return true;
  });
  return best;
}

RecoverabilityVerdict recoverability(const DenseMatrix& X0, const DenseMatrix& X_star,
                                     std::size_t k, std::size_t n1, const OracleConfig& cfg) {
  RecoverabilityVerdict v;
  v.sr = submatrix_residual(X0, X_star, k, n1, cfg);
  v.nr = noise_residual(X0, k);
  v.ms_k_minus_1 = max_subspace_cardinality(X_star, k, cfg);
  v.solvable = v.sr > v.nr;
  return v;
}

}  // namespace trimpcr
