#include "trimpcr/baselines.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "trimpcr/errors.hpp"

namespace trimpcr {

namespace {

void check_lengths(const DenseMatrix& X, const Vector& y) {
  if (X.rows() != y.size()) {
    throw DimensionError("X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
  }
}

}  // namespace

Vector ols_fit(const DenseMatrix& X, const Vector& y, const Tolerances& tol) {
  check_lengths(X, y);
  return least_squares(X, y, tol);
}

Vector ridge_fit(const DenseMatrix& X, const Vector& y, const RidgeConfig& cfg,
                 const Tolerances& tol) {
  check_lengths(X, y);
  if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
    throw std::invalid_argument("ridge: lambda must be finite and >= 0");
  }
  if (cfg.lambda == 0.0) return ols_fit(X, y, tol);
  // Solve in whichever of the primal (m x m) or dual (rows x rows) systems is smaller.
  if (X.rows() >= X.cols()) {
    DenseMatrix G = X.transpose() * X;
    G.diagonal().array() += cfg.lambda;
    return G.llt().solve(X.transpose() * y);
  }
  DenseMatrix K = X * X.transpose();
  K.diagonal().array() += cfg.lambda;
  return X.transpose() * K.llt().solve(y);
}

}  // namespace trimpcr
