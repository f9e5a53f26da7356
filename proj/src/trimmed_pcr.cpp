#include "trimpcr/trimmed_pcr.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trimpcr/errors.hpp"
#include "trimpcr/trimmed_opt.hpp"

namespace trimpcr {

BasisMode parse_basis_mode(std::string_view text) {
  if (text == "efficient") return BasisMode::efficient;
  if (text == "exact") return BasisMode::exact;
  throw std::invalid_argument("unknown basis mode '" + std::string(text) + "'");
}

RegressionResult tpcr_fit_with_basis(const DenseMatrix& X, const Vector& y, std::size_t n,
                                     const OrthonormalBasis& basis, const RecoveryOptions& opts,
                                     const std::optional<IndexSet>& warm_kept) {
  opts.validate();
  if (X.rows() != y.size()) {
    throw DimensionError("tpcr: X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
  }
  if (basis.dim() != static_cast<std::size_t>(X.cols())) {
    throw DimensionError("tpcr: basis dimension does not match the column count of X");
  }
  if (n < 1 || n > static_cast<std::size_t>(X.rows())) {
    throw std::invalid_argument("tpcr: keep count outside [1, rows]");
  }
  require_finite(y, "y");

  const DenseMatrix U = basis.coordinates(X);
  const auto problem = linear_trimmed_problem(U, y, n, opts.tol);
  TrimOptions trim;
  trim.converge_eps = opts.tol.converge_eps;
  trim.warm_start = warm_kept;
  auto solved = solve_trimmed_multistart(problem, opts.restarts, opts.seed, trim);

  RegressionResult out;
  out.beta_U_hat = solved.theta;
  out.beta_hat = basis.rows().transpose() * solved.theta;
  out.train_loss = solved.loss();
  out.kept = std::move(solved.kept);
  out.basis = basis.rows();
  out.converged = solved.converged;
  return out;
}

RegressionResult tpcr_fit(const DenseMatrix& X, const Vector& y, std::size_t n, std::size_t k,
                          const RecoveryOptions& opts, BasisMode mode) {
  if (X.rows() != y.size()) {
    throw DimensionError("tpcr: X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
  }
  RecoveryResult rec = mode == BasisMode::exact ? recover_exact(X, n, k, opts)
                                                : recover_efficient(X, n, k, opts);
  return tpcr_fit_with_basis(X, y, n, rec.basis, opts, rec.kept);
}

Vector predict(const Vector& beta, const DenseMatrix& X_eval) {
  if (X_eval.cols() != beta.size()) {
    throw DimensionError("predict: X has " + std::to_string(X_eval.cols()) +
                         " columns but beta has length " + std::to_string(beta.size()));
  }
  return X_eval * beta;
}

double expected_quadratic_loss(const Vector& beta_hat, const Vector& beta_star,
                               const DenseMatrix& X_eval) {
  if (beta_hat.size() != beta_star.size()) {
    throw DimensionError("expected_quadratic_loss: coefficient lengths differ");
  }
  if (X_eval.rows() == 0) throw std::invalid_argument("expected_quadratic_loss: empty evaluation set");
  return predict(beta_hat - beta_star, X_eval).squaredNorm() / static_cast<double>(X_eval.rows());
}

ToleranceBound tolerance_bound(double sigma, double gamma, double c) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("tolerance_bound: sigma must be finite and >= 0");
  }
  if (!(gamma >= 0.0) || gamma >= 1.0) {
    throw std::invalid_argument("tolerance_bound: gamma must lie in [0, 1); the bound is vacuous otherwise");
  }
  if (!(c > 1.0) || !std::isfinite(c)) throw std::invalid_argument("tolerance_bound: c must exceed 1");
  const double lift = 1.0 + std::sqrt(1.0 / (1.0 - gamma));
  return {sigma, gamma, c, 4.0 * sigma * sigma * lift * lift * std::log(c)};
}

double rmse(const Vector& pred, const Vector& truth) {
  if (pred.size() != truth.size()) {
    throw DimensionError("rmse: lengths differ (" + std::to_string(pred.size()) + " vs " +
                         std::to_string(truth.size()) + ")");
  }
  if (pred.size() == 0) throw std::invalid_argument("rmse: empty vectors");
  return std::sqrt((pred - truth).squaredNorm() / static_cast<double>(pred.size()));
}

}  // namespace trimpcr
