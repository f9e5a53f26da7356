#include <gtest/gtest.h>

#include <map>
#include <sstream>
#include <tuple>

#include "trimpcr/experiment.hpp"
#include "trimpcr/matrix_io.hpp"

using namespace trimpcr;

namespace {

GridSpec small_grid() {
  GridSpec spec;
  spec.k_values = {2, 4};
  spec.n1_values = {5, 10};
  spec.trials = 1;
  spec.total_rows = 60;
  spec.base.m = 20;
  spec.base.feature_noise_std = 0.0;
  spec.restarts = 2;
  spec.eval_rows = 30;
  return spec;
}

std::string csv(const Table& t) {
  std::ostringstream out;
  write_table(out, t);
  return out.str();
}

}  // namespace

TEST(TrimmedMean, Rule) {
  EXPECT_DOUBLE_EQ(trimmed_mean({5.0, 1.0, 3.0}), 3.0);
  EXPECT_DOUBLE_EQ(trimmed_mean({1.0, 2.0, 3.0, 100.0}), 2.5);
  EXPECT_DOUBLE_EQ(trimmed_mean({1.0, 4.0}), 2.5);
  EXPECT_DOUBLE_EQ(trimmed_mean({7.0}), 7.0);
  EXPECT_DOUBLE_EQ(trimmed_mean({2.0, 2.0, 2.0, 9.0, 2.0}), 2.0);
}

TEST(Grid, CardinalityAndOrder) {
  const auto reports = run_grid(small_grid(), 1);
  ASSERT_EQ(reports.size(), 16u);
  for (std::size_t i = 1; i < reports.size(); ++i) {
    const auto& a = reports[i - 1];
    const auto& b = reports[i];
    EXPECT_LT(std::tuple(a.k, a.n1, a.trial, static_cast<int>(a.method)),
              std::tuple(b.k, b.n1, b.trial, static_cast<int>(b.method)));
  }
  for (const auto& r : reports) {
    EXPECT_GE(r.rmse, 0.0);
    EXPECT_EQ(r.ident_rate.has_value(), r.method == GridMethod::tpcr);
    if (r.ident_rate) EXPECT_DOUBLE_EQ(*r.ident_rate, 1.0);
  }
}

TEST(Grid, IndependentOfJobCount) {
  const auto a = reports_table(run_grid(small_grid(), 1));
  const auto b = reports_table(run_grid(small_grid(), 3));
  ASSERT_EQ(a.rows.size(), b.rows.size());
  const std::size_t wall = a.column("wall_time_ms");
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    for (std::size_t j = 0; j < a.header.size(); ++j) {
      if (j != wall) EXPECT_EQ(a.rows[i][j], b.rows[i][j]);
    }
  }
}

TEST(Grid, AggregateIsTrimmedMeanOfDetail) {
  GridSpec spec = small_grid();
  spec.k_values = {2};
  spec.n1_values = {5};
  spec.trials = 4;
  spec.base.feature_noise_std = 0.1;
  const auto reports = run_grid(spec, 2);
  ASSERT_EQ(reports.size(), 16u);
  // Recompute from the CSV text, the way an external script would.
  std::istringstream in(csv(reports_table(reports)));
  const Table detail = read_table(in);
  std::map<std::string, std::vector<double>> by_method;
  for (std::size_t i = 0; i < detail.rows.size(); ++i) {
    by_method[detail.rows[i][detail.column("method")]].push_back(detail.number(i, "rmse"));
  }
  const auto agg = aggregate(reports);
  ASSERT_EQ(agg.size(), 4u);
  for (const auto& row : agg) {
    auto v = by_method.at(std::string(to_string(row.method)));
    std::sort(v.begin(), v.end());
    const double want = (v[1] + v[2]) / 2.0;
    EXPECT_NEAR(row.rmse, want, 1e-12 * std::max(1.0, want));
    EXPECT_EQ(row.trials, 4u);
  }
}

TEST(Grid, TablesRoundTripThroughReader) {
  const auto reports = run_grid(small_grid(), 1);
  for (const Table& t : {reports_table(reports), aggregate_table(aggregate(reports))}) {
    std::istringstream in(csv(t));
    const Table back = read_table(in);
    EXPECT_EQ(back.header, t.header);
    EXPECT_EQ(back.rows, t.rows);
  }
  EXPECT_EQ(reports_table(reports).header,
            (std::vector<std::string>{"k", "n1", "trial", "method", "rmse", "ident_rate",
                                      "wall_time_ms", "seed"}));
}

TEST(Grid, Validation) {
  GridSpec spec = small_grid();
  spec.k_values.clear();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_grid();
  spec.trials = 0;
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  EXPECT_EQ(parse_grid_method("ols_pristine"), GridMethod::ols_pristine);
  EXPECT_THROW(parse_grid_method("lasso"), std::invalid_argument);
}

TEST(Bench, RowsAndDeterminism) {
  BenchSpec spec;
  spec.sizes = {120, 200};
  spec.rank = 3;
  spec.n1 = 10;
  spec.m = 30;
  spec.restarts = 2;
  const auto a = run_bench(spec);
  const auto b = run_bench(spec);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].rows, 120u);
  EXPECT_EQ(a[1].rows, 200u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].residual, b[i].residual);
    EXPECT_GE(a[i].wall_time_ms, 0.0);
  }
  EXPECT_EQ(bench_table(a).header,
            (std::vector<std::string>{"rows", "rank", "n1", "wall_time_ms", "residual"}));
  spec.sizes = {200, 120};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec.sizes = {};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
}

TEST(Bench, SingleSize) {
  BenchSpec spec;
  spec.sizes = {100};
  spec.rank = 2;
  spec.n1 = 5;
  spec.m = 20;
  spec.restarts = 1;
  EXPECT_EQ(run_bench(spec).size(), 1u);
}
