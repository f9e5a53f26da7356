#include "trimpcr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "trimpcr/subspace_recovery.hpp"
#include "trimpcr/trimmed_pcr.hpp"

namespace trimpcr {

std::string_view to_string(GridMethod method) {
  switch (method) {
    case GridMethod::tpcr: return "tpcr";
    case GridMethod::ols_all: return "ols_all";
    case GridMethod::ols_pristine: return "ols_pristine";
    case GridMethod::ridge: return "ridge";
  }
  return "tpcr";
}

GridMethod parse_grid_method(std::string_view text) {
  for (GridMethod m : kGridMethods) {
    if (to_string(m) == text) return m;
  }
  throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

void GridSpec::validate() const {
  if (k_values.empty() || n1_values.empty()) {
    throw std::invalid_argument("grid: k and n1 value lists must be non-empty");
  }
  if (trials < 1) throw std::invalid_argument("grid: trials must be >= 1");
  if (restarts < 1) throw std::invalid_argument("grid: restarts must be >= 1");
  if (eval_rows < 1) throw std::invalid_argument("grid: eval_rows must be >= 1");
  tol.validate();
  for (std::size_t n1 : n1_values) {
    if (n1 >= total_rows) throw std::invalid_argument("grid: every n1 must be below the row total");
    for (std::size_t k : k_values) {
      if (k < 1 || k > std::min(total_rows - n1, base.m)) {
        throw std::invalid_argument("grid: k=" + std::to_string(k) + " does not fit n1=" +
                                    std::to_string(n1));
      }
    }
  }
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t k, std::size_t n1, std::size_t trial) {
  return derive_seed(derive_seed(derive_seed(master, k), n1), trial);
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

std::vector<TrialReport> run_trial(const GridSpec& spec, std::size_t k, std::size_t n1,
                                   std::size_t trial) {
  SyntheticConfig cfg = spec.base;
  cfg.k = k;
  cfg.n1 = n1;
  cfg.n = spec.total_rows - n1;
  cfg.seed = trial_seed(spec.base.seed, k, n1, trial);
  const PoisonedDataset ds = assemble(cfg);
  const EvalSet eval = gen_eval_set(cfg, ds.beta_star, ds.B, spec.eval_rows);

  std::vector<TrialReport> out;
  for (GridMethod method : kGridMethods) {
    TrialReport rep{k, n1, trial, method, 0.0, std::nullopt, 0.0, cfg.seed};
    const auto start = Clock::now();
    Vector beta;
    switch (method) {
      case GridMethod::tpcr: {
        RecoveryOptions opts;
        opts.restarts = spec.restarts;
        opts.seed = cfg.seed;
        opts.tol = spec.tol;
        const RecoveryResult rec = recover_efficient(ds.X, cfg.n, k, opts);
        beta = tpcr_fit_with_basis(ds.X, ds.y, cfg.n, rec.basis, opts, rec.kept).beta_hat;
        rep.ident_rate = identification_rate(rec, ds.adversarial);
        break;
      }
      case GridMethod::ols_all:
        beta = ols_fit(ds.X, ds.y, spec.tol);
        break;
      case GridMethod::ols_pristine:
        beta = ols_fit(select_rows(ds.X, ds.pristine), select_rows(ds.y, ds.pristine), spec.tol);
        break;
      case GridMethod::ridge:
        beta = ridge_fit(ds.X, ds.y, spec.ridge, spec.tol);
        break;
    }
    rep.wall_time_ms = elapsed_ms(start);
    rep.rmse = rmse(predict(beta, eval.X), eval.y);
    out.push_back(rep);
  }
  return out;
}

std::vector<TrialReport> run_grid(const GridSpec& spec, std::size_t jobs) {
  spec.validate();
  std::vector<std::size_t> ks = spec.k_values;
  std::vector<std::size_t> n1s = spec.n1_values;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(n1s.begin(), n1s.end());
  n1s.erase(std::unique(n1s.begin(), n1s.end()), n1s.end());

  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> tasks;
  for (std::size_t k : ks) {
    for (std::size_t n1 : n1s) {
      for (std::size_t t = 0; t < spec.trials; ++t) tasks.emplace_back(k, n1, t);
    }
  }
  std::vector<std::vector<TrialReport>> slots(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const auto [k, n1, t] = tasks[i];
        slots[i] = run_trial(spec, k, n1, t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(tasks.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TrialReport> out;
  for (auto& s : slots) out.insert(out.end(), s.begin(), s.end());
  return out;
}

double trimmed_mean(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("trimmed_mean: no values");
  std::sort(values.begin(), values.end());
  auto first = values.begin();
  auto last = values.end();
  if (values.size() >= 3) {
    ++first;
    --last;
  }
  return std::accumulate(first, last, 0.0) / static_cast<double>(last - first);
}

std::vector<AggregateRow> aggregate(const std::vector<TrialReport>& reports) {
  struct Bucket {
    std::vector<double> rmse, ident, time;
  };
  std::map<std::tuple<std::size_t, std::size_t, int>, Bucket> cells;
  for (const auto& r : reports) {
    auto& b = cells[{r.k, r.n1, static_cast<int>(r.method)}];
    b.rmse.push_back(r.rmse);
    b.time.push_back(r.wall_time_ms);
    if (r.ident_rate) b.ident.push_back(*r.ident_rate);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, b] : cells) {
    AggregateRow row;
    row.k = std::get<0>(key);
    row.n1 = std::get<1>(key);
    row.method = static_cast<GridMethod>(std::get<2>(key));
    row.trials = b.rmse.size();
    row.rmse = trimmed_mean(b.rmse);
    row.wall_time_ms = trimmed_mean(b.time);
    if (!b.ident.empty()) row.ident_rate = trimmed_mean(b.ident);
    out.push_back(row);
  }
  return out;
}

namespace {

std::string optional_cell(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

}  // namespace

Table reports_table(const std::vector<TrialReport>& reports) {
  Table t;
  t.header = {"k", "n1", "trial", "method", "rmse", "ident_rate", "wall_time_ms", "seed"};
  for (const auto& r : reports) {
    t.rows.push_back({std::to_string(r.k), std::to_string(r.n1), std::to_string(r.trial),
                      std::string(to_string(r.method)), format_double(r.rmse),
                      optional_cell(r.ident_rate), format_double(r.wall_time_ms),
                      std::to_string(r.seed)});
  }
  return t;
}

Table aggregate_table(const std::vector<AggregateRow>& rows) {
  Table t;
  t.header = {"k", "n1", "method", "trials", "rmse", "ident_rate", "wall_time_ms"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.k), std::to_string(r.n1), std::string(to_string(r.method)),
                      std::to_string(r.trials), format_double(r.rmse),
                      optional_cell(r.ident_rate), format_double(r.wall_time_ms)});
  }
  return t;
}

void BenchSpec::validate() const {
  if (sizes.empty()) throw std::invalid_argument("bench: no sizes given");
  for (std::size_t i = 1; i < sizes.size(); ++i) {
    if (sizes[i] <= sizes[i - 1]) throw std::invalid_argument("bench: sizes must be strictly ascending");
  }
  if (sizes.front() <= n1) throw std::invalid_argument("bench: every size must exceed n1");
  if (rank < 1 || rank > std::min(sizes.front() - n1, m)) {
    throw std::invalid_argument("bench: rank must lie in [1, min(rows - n1, m)]");
  }
  if (restarts < 1) throw std::invalid_argument("bench: restarts must be >= 1");
  tol.validate();
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  spec.validate();
  std::vector<BenchRow> out;
  for (std::size_t rows : spec.sizes) {
    SyntheticConfig cfg;
    cfg.n = rows - spec.n1;
    cfg.n1 = spec.n1;
    cfg.m = spec.m;
    cfg.k = spec.rank;
    cfg.feature_noise_std = spec.feature_noise_std;
    cfg.label_noise_std = 0.0;
    cfg.seed = derive_seed(spec.seed, rows);
    const PoisonedDataset ds = assemble(cfg);

    RecoveryOptions opts;
    opts.restarts = spec.restarts;
    opts.seed = cfg.seed;
    opts.tol = spec.tol;
    const auto start = Clock::now();
    const RecoveryResult rec = recover_efficient(ds.X, cfg.n, spec.rank, opts);
    out.push_back({rows, spec.rank, spec.n1, elapsed_ms(start), rec.residual});
  }
  return out;
}

Table bench_table(const std::vector<BenchRow>& rows) {
  Table t;
  t.header = {"rows", "rank", "n1", "wall_time_ms", "residual"};
  for (const auto& r : rows) {
    t.rows.push_back({std::to_string(r.rows), std::to_string(r.rank), std::to_string(r.n1),
                      format_double(r.wall_time_ms), format_double(r.residual)});
  }
  return t;
}

}  // namespace trimpcr
