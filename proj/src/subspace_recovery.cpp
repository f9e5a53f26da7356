#include "trimpcr/subspace_recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "trimpcr/combinations.hpp"
#include "trimpcr/errors.hpp"
#include "trimpcr/trimmed_opt.hpp"

namespace trimpcr {

void RecoveryOptions::validate() const {
  tol.validate();
  if (restarts < 1) throw std::invalid_argument("recovery: restarts must be >= 1");
  if (max_outer_iters < 1) throw std::invalid_argument("recovery: max_outer_iters must be >= 1");
}

namespace {

void check_shape(const DenseMatrix& X, std::size_t n, std::size_t k, const char* what) {
  require_finite(X, "X");
  const auto rows = static_cast<std::size_t>(X.rows());
  const auto cols = static_cast<std::size_t>(X.cols());
  if (n < 1 || n > rows) {
    throw std::invalid_argument(std::string(what) + ": keep count " + std::to_string(n) +
                                " outside [1, " + std::to_string(rows) + "]");
  }
  if (k < 1 || k > std::min(rows, cols)) {
    throw std::invalid_argument(std::string(what) + ": rank " + std::to_string(k) +
                                " outside [1, min(rows, cols)]");
  }
}

void check_cap(const DenseMatrix& X, const RecoveryOptions& opts, const char* what) {
  if (static_cast<std::size_t>(X.rows()) > opts.enumeration_cap) {
    throw CapExceededError(std::string(what) + ": " + std::to_string(X.rows()) +
                           " rows exceed the enumeration cap of " +
                           std::to_string(opts.enumeration_cap));
  }
}

/// Top-r right singular vectors of M as rows (r clipped to what M supports).
DenseMatrix top_right_vectors(const DenseMatrix& M, std::size_t r) {
  const auto limit = static_cast<std::size_t>(std::min(M.rows(), M.cols()));
  r = std::min(r, limit);
  return top_right_singular_vectors(M, r);
}

Vector projection_losses(const DenseMatrix& X, const DenseMatrix& Q) {
  if (Q.rows() == 0) return X.rowwise().squaredNorm();
  return (X - (X * Q.transpose()) * Q).rowwise().squaredNorm();
}

RecoveryResult finish(const DenseMatrix& X, const DenseMatrix& Q, IndexSet kept, std::size_t k,
                      bool converged, const Tolerances& tol) {
  const DenseMatrix full = complete_orthonormal_rows(Q, k);
  const DenseMatrix Xk = select_rows(X, kept);
  RecoveryResult out{OrthonormalBasis::from_rows(full, tol.orth_eps), std::move(kept), X * full.transpose(),
                     0.0, converged, static_cast<std::size_t>(Q.rows())};
  out.residual = (Xk - (Xk * full.transpose()) * full).norm();
  return out;
}

}  // namespace

NoiseFreeRecovery recover_noise_free(const DenseMatrix& X, std::size_t n, std::size_t k,
                                     const RecoveryOptions& opts) {
  opts.validate();
  check_shape(X, n, k, "recover_noise_free");
  check_cap(X, opts, "recover_noise_free");
  const auto rows = static_cast<std::size_t>(X.rows());

  std::optional<RecoveryResult> first;
  std::vector<DenseMatrix> projectors;
  for_each_combination(rows, n, [&](const std::vector<std::size_t>& idx) {
    IndexSet subset(idx, rows);
    const DenseMatrix sub = select_rows(X, subset);
    if (numeric_rank(sub, opts.tol) != k) return true;
    const DenseMatrix Q = top_right_vectors(sub, k);
    const DenseMatrix P = Q.transpose() * Q;
    const bool seen = std::any_of(projectors.begin(), projectors.end(), [&](const DenseMatrix& other) {
      return (other - P).norm() < 1e-6;
    });
    if (!seen) projectors.push_back(P);
    if (!first) first = finish(X, Q, std::move(subset), k, true, opts.tol);
    return true;
  });
  if (!first) {
    throw NumericalError("recover_noise_free: no " + std::to_string(n) + "-row subset has rank " +
                         std::to_string(k));
  }
  return NoiseFreeRecovery{std::move(*first), projectors.size()};
}

RecoveryResult recover_exact(const DenseMatrix& X, std::size_t n, std::size_t k,
                             const RecoveryOptions& opts) {
  opts.validate();
  check_shape(X, n, k, "recover_exact");
  check_cap(X, opts, "recover_exact");
  const auto rows = static_cast<std::size_t>(X.rows());
  const auto kk = static_cast<Eigen::Index>(k);
  // Differences below this are rounding; the earlier subset is kept.
  const double tie = 1e-12 * std::max(X.norm(), 1.0);

  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> best_idx;
  for_each_combination(rows, n, [&](const std::vector<std::size_t>& idx) {
    DenseMatrix sub(static_cast<Eigen::Index>(n), X.cols());
    for (std::size_t i = 0; i < n; ++i) {
      sub.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(idx[i]));
    }
    const Vector s = singular_values(sub);
    const double res = s.size() > kk ? s.tail(s.size() - kk).norm() : 0.0;
    if (res < best - tie) {
      best = res;
      best_idx = idx;
    }
    return true;
  });
  IndexSet kept(best_idx, rows);
  const DenseMatrix Q = top_right_vectors(select_rows(X, kept), k);
  return finish(X, Q, std::move(kept), k, true, opts.tol);
}

namespace {

struct AltState {
  DenseMatrix Q;  // r x m, orthonormal rows
  IndexSet kept;
  double residual = std::numeric_limits<double>::infinity();
  bool converged = false;
};

AltState alternate(const DenseMatrix& X, std::size_t n, DenseMatrix Q,
                   std::optional<IndexSet> warm, std::uint64_t seed,
                   const RecoveryOptions& opts) {
  AltState st;
  st.Q = std::move(Q);
  Vector losses = projection_losses(X, st.Q);
  st.kept = warm ? *warm : select_smallest(losses, n);
  st.residual = std::sqrt(sum_over(losses, st.kept));
  std::optional<IndexSet> previous;

  for (std::size_t it = 0; it < opts.max_outer_iters; ++it) {
    if (st.Q.rows() == 0) {
      st.converged = true;
      break;
    }
    // U-step over every row; with orthonormal Q the minimizer is X Q^T.
    const DenseMatrix U = X * st.Q.transpose();

    TrimmedProblem<DenseMatrix> problem;
    problem.row_count = static_cast<std::size_t>(X.rows());
    problem.keep_count = n;
    problem.fit = [&](const IndexSet& kept) {
      return least_squares(select_rows(U, kept), select_rows(X, kept), opts.tol);
    };
    problem.row_losses = [&](const DenseMatrix& B) -> Vector {
      return (X - U * B).rowwise().squaredNorm();
    };
    TrimOptions trim;
    trim.converge_eps = opts.tol.converge_eps;
    trim.warm_start = select_smallest(projection_losses(X, st.Q), n);
    const auto inner = solve_trimmed(problem, derive_seed(seed, it), trim);

    st.Q = orthonormal_row_space(inner.theta, opts.tol);
    losses = projection_losses(X, st.Q);
    IndexSet kept = select_smallest(losses, n);
    double residual = std::sqrt(sum_over(losses, kept));

    if (previous && kept == *previous) {
      // Kept set is stable: refit the subspace on it directly.
      const DenseMatrix polished = top_right_vectors(select_rows(X, kept), static_cast<std::size_t>(st.Q.rows()));
      const Vector polished_losses = projection_losses(X, polished);
      IndexSet repicked = select_smallest(polished_losses, n);
      const double polished_res = std::sqrt(sum_over(polished_losses, repicked));
      if (polished_res <= residual) {
        st.Q = polished;
        residual = polished_res;
        const bool stable = repicked == kept;
        kept = std::move(repicked);
        if (stable) {
          st.kept = std::move(kept);
          st.residual = residual;
          st.converged = true;
          break;
        }
      } else {
        st.kept = std::move(kept);
        st.residual = residual;
        st.converged = true;
        break;
      }
    }
    const bool plateau = std::abs(st.residual - residual) < opts.tol.converge_eps;
    previous = kept;
    st.kept = std::move(kept);
    st.residual = residual;
    if (plateau && it > 0) {
      st.converged = true;
      break;
    }
  }
  return st;
}

bool is_exact(const DenseMatrix& X, const AltState& st, const Tolerances& tol) {
  return st.residual <= tol.rank_eps * select_rows(X, st.kept).norm();
}

// For an exact fit the kept rows lie in span(Q), so their rank is that of
// their (n x r) coordinates.
std::size_t kept_rank(const DenseMatrix& X, const AltState& st, const Tolerances& tol) {
  return numeric_rank(select_rows(X, st.kept) * st.Q.transpose(), tol);
}

struct Candidate {
  AltState state;
  bool exact = false;
  std::size_t eff_rank = 0;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.exact != b.exact) return a.exact;
  if (a.exact) return a.eff_rank < b.eff_rank;
  return a.state.residual < b.state.residual;
}

// When the kept rows fit exactly, a smaller rank may also fit n rows exactly;
// with a rank above the intrinsic one, mixed pristine/adversarial sets can
// fit exactly and only a lower rank separates them.
Candidate descend(const DenseMatrix& X, std::size_t n, Candidate cand, std::uint64_t seed,
                  const RecoveryOptions& opts) {
  while (cand.exact && cand.eff_rank > 1) {
    const DenseMatrix Xk = select_rows(X, cand.state.kept);
    const std::size_t target = cand.eff_rank - 1;
    AltState next = alternate(X, n, top_right_vectors(Xk, target), cand.state.kept,
                              derive_seed(seed, 1000 + target), opts);
    if (!is_exact(X, next, opts.tol)) break;
    cand.state = std::move(next);
    cand.eff_rank = kept_rank(X, cand.state, opts.tol);
  }
  return cand;
}

}  // namespace

RecoveryResult recover_efficient(const DenseMatrix& X, std::size_t n, std::size_t k,
                                 const RecoveryOptions& opts) {
  opts.validate();
  check_shape(X, n, k, "recover_efficient");
  const auto rows = static_cast<std::size_t>(X.rows());

  std::optional<Candidate> best;
  for (std::size_t r = 0; r < opts.restarts; ++r) {
    const std::uint64_t seed = restart_seed(opts.seed, r);
    Rng rng(seed);
    DenseMatrix Q0;
    if (r == 0) {
      const DenseMatrix sub = select_rows(X, random_subset(rows, n, rng));
      Q0 = top_right_vectors(sub, k);
    } else {
      Q0 = orthonormal_row_space(gaussian_matrix(static_cast<Eigen::Index>(k), X.cols(), rng), opts.tol);
    }
    Candidate cand;
    cand.state = alternate(X, n, std::move(Q0), std::nullopt, derive_seed(seed, 1), opts);
    cand.exact = is_exact(X, cand.state, opts.tol);
    cand.eff_rank = static_cast<std::size_t>(cand.state.Q.rows());
    if (cand.exact) {
      cand.eff_rank = kept_rank(X, cand.state, opts.tol);
    }
    cand = descend(X, n, std::move(cand), seed, opts);
    if (!best || better(cand, *best)) best = std::move(cand);
  }

  AltState& st = best->state;
  DenseMatrix Q = st.Q;
  if (best->exact) {
    // Report the row space the kept rows actually occupy.
    Q = top_right_vectors(select_rows(X, st.kept), best->eff_rank);
  }
  return finish(X, Q, std::move(st.kept), k, st.converged, opts.tol);
}

double identification_rate(const RecoveryResult& result, const IndexSet& true_adversarial) {
  if (true_adversarial.universe() != result.kept.universe()) {
    throw std::invalid_argument("identification_rate: index sets have different universes");
  }
  if (true_adversarial.empty()) return 1.0;
  const std::size_t trimmed = true_adversarial.size() - intersection_size(true_adversarial, result.kept);
  return static_cast<double>(trimmed) / static_cast<double>(true_adversarial.size());
}

double span_distance(const OrthonormalBasis& a, const OrthonormalBasis& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError("span_distance: ambient dimensions differ (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
  return (a.projector() - b.projector()).norm();
}

}  // namespace trimpcr
