#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "trimpcr/index_set.hpp"
#include "trimpcr/matrix_core.hpp"
#include "trimpcr/subspace_recovery.hpp"

namespace trimpcr {

enum class BasisMode { efficient, exact };

BasisMode parse_basis_mode(std::string_view text);

struct RegressionResult {
  Vector beta_hat;    // length m, basis^T * beta_U_hat
  Vector beta_U_hat;  // length k
  IndexSet kept;
  double train_loss = 0.0;  // sum of the n smallest squared residuals
  DenseMatrix basis;        // k x m rows used for the projection
  bool converged = true;
};

/// Trimmed principal component regression: recover a rank-k basis from X,
/// regress y on the coordinates X * B^T keeping the n best-fitting rows,
/// and lift the coefficients back to the m features.
RegressionResult tpcr_fit(const DenseMatrix& X, const Vector& y, std::size_t n, std::size_t k,
                          const RecoveryOptions& opts = {}, BasisMode mode = BasisMode::efficient);

/// The regression half with the basis supplied by the caller. `warm_kept`
/// seeds the first restart of the trimmed solver.
RegressionResult tpcr_fit_with_basis(const DenseMatrix& X, const Vector& y, std::size_t n,
                                     const OrthonormalBasis& basis, const RecoveryOptions& opts = {},
                                     const std::optional<IndexSet>& warm_kept = std::nullopt);

Vector predict(const Vector& beta, const DenseMatrix& X_eval);

/// Mean over rows x of X_eval of (x (beta_hat - beta_star))^2.
double expected_quadratic_loss(const Vector& beta_hat, const Vector& beta_star,
                               const DenseMatrix& X_eval);

struct ToleranceBound {
  double sigma = 0.0;
  double gamma = 0.0;
  double c = 0.0;
  double delta = 0.0;
};

/// delta = 4 sigma^2 (1 + sqrt(1 / (1 - gamma)))^2 log(c).
ToleranceBound tolerance_bound(double sigma, double gamma, double c);

double rmse(const Vector& pred, const Vector& truth);

}  // namespace trimpcr
