#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "trimpcr/baselines.hpp"
#include "trimpcr/datagen.hpp"
#include "trimpcr/matrix_io.hpp"

namespace trimpcr {

enum class GridMethod { tpcr, ols_all, ols_pristine, ridge };

std::string_view to_string(GridMethod method);
GridMethod parse_grid_method(std::string_view text);

inline constexpr GridMethod kGridMethods[] = {GridMethod::tpcr, GridMethod::ols_all,
                                              GridMethod::ols_pristine, GridMethod::ridge};

struct GridSpec {
  std::vector<std::size_t> k_values;
  std::vector<std::size_t> n1_values;
  std::size_t trials = 3;
  /// n + n1, held fixed across the grid.
  std::size_t total_rows = 400;
  /// Supplies m, noise levels, attack and the master seed.
  SyntheticConfig base;
  std::size_t restarts = 8;
  std::size_t eval_rows = 200;
  RidgeConfig ridge;
  Tolerances tol;

  void validate() const;
};

struct TrialReport {
  std::size_t k = 0;
  std::size_t n1 = 0;
  std::size_t trial = 0;
  GridMethod method = GridMethod::tpcr;
  double rmse = 0.0;
  std::optional<double> ident_rate;  // tpcr only
  double wall_time_ms = 0.0;
  std::uint64_t seed = 0;
};

std::uint64_t trial_seed(std::uint64_t master, std::size_t k, std::size_t n1, std::size_t trial);

/// Every method on one generated dataset, in kGridMethods order.
std::vector<TrialReport> run_trial(const GridSpec& spec, std::size_t k, std::size_t n1,
                                   std::size_t trial);

/// All cells on up to `jobs` threads. Rows come back ordered by (k, n1,
/// trial, method) whatever the scheduling.
std::vector<TrialReport> run_grid(const GridSpec& spec, std::size_t jobs = 1);

/// Mean after dropping one largest and one smallest value; the plain mean
/// when fewer than three values are given.
double trimmed_mean(std::vector<double> values);

struct AggregateRow {
  std::size_t k = 0;
  std::size_t n1 = 0;
  GridMethod method = GridMethod::tpcr;
  std::size_t trials = 0;
  double rmse = 0.0;
  std::optional<double> ident_rate;
  double wall_time_ms = 0.0;
};

std::vector<AggregateRow> aggregate(const std::vector<TrialReport>& reports);

Table reports_table(const std::vector<TrialReport>& reports);
Table aggregate_table(const std::vector<AggregateRow>& rows);

struct BenchSpec {
  std::vector<std::size_t> sizes;
  std::size_t rank = 20;
  std::size_t n1 = 50;
  std::size_t m = 400;
  double feature_noise_std = 0.0;
  std::size_t restarts = 8;
  std::uint64_t seed = kDefaultSeed;
  Tolerances tol;

  void validate() const;
};

struct BenchRow {
  std::size_t rows = 0;
  std::size_t rank = 0;
  std::size_t n1 = 0;
  double wall_time_ms = 0.0;
  double residual = 0.0;
};

/// Times recover_efficient on one generated dataset per size.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

Table bench_table(const std::vector<BenchRow>& rows);

}  // namespace trimpcr
