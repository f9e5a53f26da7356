#pragma once

#include "trimpcr/matrix_core.hpp"

namespace trimpcr {

struct RidgeConfig {
  double lambda = 1e-3;
};

/// Minimum-norm least-squares coefficients.
Vector ols_fit(const DenseMatrix& X, const Vector& y, const Tolerances& tol = {});

/// argmin ||X beta - y||^2 + lambda ||beta||^2. lambda = 0 falls back to ols_fit.
Vector ridge_fit(const DenseMatrix& X, const Vector& y, const RidgeConfig& cfg = {},
                 const Tolerances& tol = {});

}  // namespace trimpcr
