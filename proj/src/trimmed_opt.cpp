#include "trimpcr/trimmed_opt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trimpcr {

IndexSet select_smallest(const Vector& losses, std::size_t keep) {
  const auto n = static_cast<std::size_t>(losses.size());
  if (keep > n) throw std::invalid_argument("select_smallest: keep exceeds row count");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto before = [&losses](std::size_t a, std::size_t b) {
    const double la = losses(static_cast<Eigen::Index>(a));
    const double lb = losses(static_cast<Eigen::Index>(b));
    return la < lb || (la == lb && a < b);
  };
  if (keep < n) {
    std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                     before);
  }
  order.resize(keep);
  return IndexSet(std::move(order), n);
}

double sum_over(const Vector& losses, const IndexSet& rows) {
  double total = 0.0;
  for (std::size_t i : rows) total += losses(static_cast<Eigen::Index>(i));
  return total;
}

namespace detail {

void validate_trim_problem(std::size_t row_count, std::size_t keep_count, bool has_fit,
                           bool has_losses, const TrimOptions& opts) {
  if (!has_fit || !has_losses) throw std::invalid_argument("trimmed problem is missing callbacks");
  if (keep_count > row_count) throw std::invalid_argument("trimmed problem: keep > row count");
  if (opts.max_iters < 1) throw std::invalid_argument("trimmed problem: max_iters must be >= 1");
  if (opts.warm_start && (opts.warm_start->size() != keep_count ||
                          opts.warm_start->universe() != row_count)) {
    throw std::invalid_argument("trimmed problem: warm start has the wrong shape");
  }
}

}  // namespace detail

TrimmedProblem<Vector> linear_trimmed_problem(const DenseMatrix& A, const Vector& y,
                                              std::size_t keep, const Tolerances& tol) {
  if (A.rows() != y.size()) {
    throw DimensionError("linear trimmed problem: A has " + std::to_string(A.rows()) +
                         " rows, y has " + std::to_string(y.size()));
  }
  TrimmedProblem<Vector> problem;
  problem.row_count = static_cast<std::size_t>(A.rows());
  problem.keep_count = keep;
  problem.start_size = std::max<std::size_t>(1, static_cast<std::size_t>(A.cols()));
  problem.fit = [&A, &y, tol](const IndexSet& kept) {
    return least_squares(select_rows(A, kept), select_rows(y, kept), tol);
  };
  problem.row_losses = [&A, &y](const Vector& theta) -> Vector {
    return (y - A * theta).array().square().matrix();
  };
  return problem;
}

}  // namespace trimpcr
