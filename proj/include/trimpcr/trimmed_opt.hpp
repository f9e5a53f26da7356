#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trimpcr/errors.hpp"
#include "trimpcr/index_set.hpp"
#include "trimpcr/matrix_core.hpp"
#include "trimpcr/random.hpp"

namespace trimpcr {

/// Minimize the sum of the keep_count smallest per-row losses over theta.
///
/// `fit` returns the exact minimizer of the summed loss over the given rows;
/// `row_losses` evaluates every row's loss for a parameter value. Losses must
/// be bounded below (squared errors are).
template <class Theta>
struct TrimmedProblem {
  std::size_t row_count = 0;
  std::size_t keep_count = 0;
  /// Rows in a random start; 0 means keep_count. A small start (for example
  /// one row per parameter) reaches more distinct local optima per restart.
  std::size_t start_size = 0;
  std::function<Theta(const IndexSet& kept)> fit;
  std::function<Vector(const Theta& theta)> row_losses;
};

struct TrimOptions {
  std::size_t max_iters = 500;
  double converge_eps = 1e-10;
  /// Starting keep-set instead of a random one (restart 0 only in multistart).
  std::optional<IndexSet> warm_start;
};

template <class Theta>
struct TrimResult {
  Theta theta{};
  IndexSet kept;
  std::vector<double> loss_trace;
  std::size_t iterations = 0;
  bool converged = false;

  double loss() const { return loss_trace.back(); }
  std::vector<std::uint8_t> tau() const { return kept.mask(); }
};

/// The fit step threw; carries the 1-based iteration it happened in.
class TrimFitError : public Error {
 public:
  TrimFitError(std::size_t iteration, const std::string& what)
      : Error("trimmed fit failed at iteration " + std::to_string(iteration) + ": " + what),
        iteration_(iteration) {}
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

/// Indices of the `keep` smallest losses. Equal losses keep the lower index.
IndexSet select_smallest(const Vector& losses, std::size_t keep);

double sum_over(const Vector& losses, const IndexSet& rows);

namespace detail {
void validate_trim_problem(std::size_t row_count, std::size_t keep_count, bool has_fit,
                           bool has_losses, const TrimOptions& opts);
}

/// Alternate fit-on-kept and keep-the-smallest until the keep-set repeats,
/// the loss plateaus within converge_eps, or max_iters is reached.
template <class Theta>
TrimResult<Theta> solve_trimmed(const TrimmedProblem<Theta>& problem, std::uint64_t seed,
                                const TrimOptions& opts = {}) {
  detail::validate_trim_problem(problem.row_count, problem.keep_count,
                                static_cast<bool>(problem.fit),
                                static_cast<bool>(problem.row_losses), opts);
  Rng rng(seed);
  const std::size_t start = problem.start_size == 0
                                ? problem.keep_count
                                : std::min(problem.start_size, problem.keep_count);
  IndexSet kept = opts.warm_start ? *opts.warm_start : random_subset(problem.row_count, start, rng);

  TrimResult<Theta> result;
  for (std::size_t iter = 1; iter <= opts.max_iters; ++iter) {
    Theta theta;
    Vector losses;
    try {
      theta = problem.fit(kept);
      losses = problem.row_losses(theta);
    } catch (const std::exception& e) {
      throw TrimFitError(iter, e.what());
    }
    if (static_cast<std::size_t>(losses.size()) != problem.row_count || !losses.allFinite()) {
      throw TrimFitError(iter, "row losses are missing or non-finite");
    }
    IndexSet next = select_smallest(losses, problem.keep_count);
    const double loss = sum_over(losses, next);

    // A larger value can only come from rounding in the fit; the previous
    // state is then already a plateau.
    if (!result.loss_trace.empty() && loss > result.loss_trace.back()) {
      result.converged = true;
      return result;
    }
    const bool repeated = (next == kept);
    const bool plateau = !result.loss_trace.empty() &&
                         std::abs(result.loss_trace.back() - loss) < opts.converge_eps;
    result.theta = std::move(theta);
    result.kept = next;
    result.loss_trace.push_back(loss);
    result.iterations = iter;
    if (repeated || plateau) {
      result.converged = true;
      return result;
    }
    kept = std::move(next);
  }
  return result;
}

/// Best of `restarts` runs (lowest final loss, ties to the lowest restart).
/// Restart r uses restart_seed(seed, r), so restarts = 1 reproduces
/// solve_trimmed(problem, seed).
template <class Theta>
TrimResult<Theta> solve_trimmed_multistart(const TrimmedProblem<Theta>& problem,
                                           std::size_t restarts, std::uint64_t seed,
                                           const TrimOptions& opts = {}) {
  if (restarts < 1) throw std::invalid_argument("solve_trimmed_multistart: restarts must be >= 1");
  std::optional<TrimResult<Theta>> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    TrimOptions run_opts = opts;
    if (r > 0) run_opts.warm_start.reset();
    auto candidate = solve_trimmed(problem, restart_seed(seed, r), run_opts);
    if (!best || candidate.loss() < best->loss()) best = std::move(candidate);
  }
  return std::move(*best);
}

/// Squared-loss linear regression y ~ A * theta as a trimmed problem.
TrimmedProblem<Vector> linear_trimmed_problem(const DenseMatrix& A, const Vector& y,
                                              std::size_t keep, const Tolerances& tol = {});

}  // namespace trimpcr
