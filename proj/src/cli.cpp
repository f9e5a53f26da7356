#include "trimpcr/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "trimpcr/baselines.hpp"
#include "trimpcr/datagen.hpp"
#include "trimpcr/errors.hpp"
#include "trimpcr/experiment.hpp"
#include "trimpcr/matrix_io.hpp"
#include "trimpcr/residual_oracles.hpp"
#include "trimpcr/subspace_recovery.hpp"
#include "trimpcr/trimmed_pcr.hpp"

namespace trimpcr::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Globals {
  std::uint64_t seed = kDefaultSeed;
  std::size_t jobs = 1;
  double rank_eps = Tolerances{}.rank_eps;

  Tolerances tol() const {
    Tolerances t;
    t.rank_eps = rank_eps;
    t.validate();
    return t;
  }
};

json number_or_inf(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path.string());
  out << j.dump(1) << '\n';
}

std::size_t default_keep(const std::optional<std::size_t>& keep, const DenseMatrix& X) {
  if (!keep) throw std::invalid_argument("--keep is required");
  if (*keep > static_cast<std::size_t>(X.rows())) {
    throw DimensionError("--keep " + std::to_string(*keep) + " exceeds the " +
                         std::to_string(X.rows()) + " rows of X");
  }
  return *keep;
}

// gen ------------------------------------------------------------------------

struct GenArgs {
  fs::path out;
  SyntheticConfig cfg;
  std::string attack = "negated_model";
};

void add_synthetic_flags(CLI::App* cmd, SyntheticConfig& cfg, std::string& attack) {
  cmd->add_option("--feature-noise", cfg.feature_noise_std, "Std dev of the feature noise")
      ->capture_default_str();
  cmd->add_option("--label-noise", cfg.label_noise_std, "Std dev of the pristine label noise")
      ->capture_default_str();
  cmd->add_option("--attack", attack, "negated_model, shifted_model or random_model")
      ->capture_default_str();
  cmd->add_option("--magnitude", cfg.attack.magnitude, "Attack magnitude")->capture_default_str();
  cmd->add_option("--m", cfg.m, "Feature count")->capture_default_str();
}

void cmd_gen(const GenArgs& a, const Globals& g, std::ostream& out) {
  SyntheticConfig cfg = a.cfg;
  cfg.attack.kind = parse_attack_kind(a.attack);
  cfg.seed = g.seed;
  const PoisonedDataset ds = assemble(cfg);
  save_dataset(a.out, ds);
  out << json{{"dir", a.out.string()},
              {"rows", ds.X.rows()},
              {"cols", ds.X.cols()},
              {"gamma", cfg.gamma()},
              {"epsilon", ds.epsilon}}
             .dump()
      << '\n';
}

// recover --------------------------------------------------------------------

struct RecoverArgs {
  fs::path input;
  std::optional<std::size_t> keep;
  std::size_t rank = 0;
  std::size_t restarts = RecoveryOptions{}.restarts;
  std::size_t cap = RecoveryOptions{}.enumeration_cap;
  std::string mode = "efficient";
  std::optional<fs::path> out_dir;
  std::optional<fs::path> truth;
};

void cmd_recover(const RecoverArgs& a, const Globals& g, std::ostream& out) {
  const DenseMatrix X = read_matrix_file(a.input);
  const std::size_t n = default_keep(a.keep, X);
  RecoveryOptions opts;
  opts.restarts = a.restarts;
  opts.seed = g.seed;
  opts.tol = g.tol();
  opts.enumeration_cap = a.cap;
  const RecoveryResult rec = a.mode == "exact" ? recover_exact(X, n, a.rank, opts)
                             : a.mode == "efficient"
                                 ? recover_efficient(X, n, a.rank, opts)
                                 : throw std::invalid_argument("unknown recovery mode '" + a.mode + "'");

  json summary{{"residual", rec.residual},
               {"kept_count", rec.kept.size()},
               {"converged", rec.converged},
               {"effective_rank", rec.effective_rank}};
  if (a.truth) {
    const DatasetTruth truth = load_truth(*a.truth);
    if (truth.adversarial.universe() != static_cast<std::size_t>(X.rows())) {
      throw DimensionError("truth file describes " + std::to_string(truth.adversarial.universe()) +
                           " rows but X has " + std::to_string(X.rows()));
    }
    summary["ident_rate"] = identification_rate(rec, truth.adversarial);
  }
  if (a.out_dir) {
    fs::create_directories(*a.out_dir);
    write_matrix_file(*a.out_dir / "basis.csv", rec.basis.rows());
    json kept = summary;
    kept["kept"] = rec.kept.indices();
    write_json_file(*a.out_dir / "kept.json", kept);
  }
  out << summary.dump() << '\n';
}

// fit / baseline -------------------------------------------------------------

struct FitArgs {
  fs::path x;
  fs::path y;
  std::optional<std::size_t> keep;
  std::size_t rank = 0;
  std::size_t restarts = RecoveryOptions{}.restarts;
  std::size_t cap = RecoveryOptions{}.enumeration_cap;
  std::string basis_mode = "efficient";
  std::optional<fs::path> predictions;
  std::optional<fs::path> out_json;
};

void emit(const json& j, const std::optional<fs::path>& path, std::ostream& out) {
  if (path) write_json_file(*path, j);
  out << j.dump() << '\n';
}

void read_xy(const fs::path& xp, const fs::path& yp, DenseMatrix& X, Vector& y) {
  X = read_matrix_file(xp);
  y = read_vector_file(yp);
  if (X.rows() != y.size()) {
    throw DimensionError("X has " + std::to_string(X.rows()) + " rows but y has " +
                         std::to_string(y.size()) + " entries");
  }
}

void cmd_fit(const FitArgs& a, const Globals& g, std::ostream& out) {
  DenseMatrix X;
  Vector y;
  read_xy(a.x, a.y, X, y);
  const std::size_t n = default_keep(a.keep, X);
  RecoveryOptions opts;
  opts.restarts = a.restarts;
  opts.seed = g.seed;
  opts.tol = g.tol();
  opts.enumeration_cap = a.cap;
  const RegressionResult fit = tpcr_fit(X, y, n, a.rank, opts, parse_basis_mode(a.basis_mode));
  if (a.predictions) write_vector_file(*a.predictions, predict(fit.beta_hat, X));
  emit(json{{"beta_hat", to_std(fit.beta_hat)},
            {"kept", fit.kept.indices()},
            {"train_loss", fit.train_loss}},
       a.out_json, out);
}

struct BaselineArgs {
  fs::path x;
  fs::path y;
  std::string method = "ols";
  double lambda = RidgeConfig{}.lambda;
  std::optional<fs::path> predictions;
  std::optional<fs::path> out_json;
};

void cmd_baseline(const BaselineArgs& a, const Globals& g, std::ostream& out) {
  DenseMatrix X;
  Vector y;
  read_xy(a.x, a.y, X, y);
  Vector beta;
  if (a.method == "ols") {
    beta = ols_fit(X, y, g.tol());
  } else if (a.method == "ridge") {
    beta = ridge_fit(X, y, RidgeConfig{a.lambda}, g.tol());
  } else {
    throw std::invalid_argument("unknown baseline method '" + a.method + "'");
  }
  const Vector pred = predict(beta, X);
  if (a.predictions) write_vector_file(*a.predictions, pred);
  emit(json{{"beta_hat", to_std(beta)}, {"method", a.method}, {"train_loss", (pred - y).squaredNorm()}},
       a.out_json, out);
}

// oracle ---------------------------------------------------------------------

struct OracleArgs {
  fs::path x0;
  fs::path x_star;
  std::size_t rank = 0;
  std::size_t n1 = 0;
  std::string sr_mode = "skip";
  std::size_t cap = OracleConfig{}.enumeration_cap;
};

void cmd_oracle(const OracleArgs& a, const Globals& g, std::ostream& out) {
  const DenseMatrix X0 = read_matrix_file(a.x0);
  const DenseMatrix Xs = read_matrix_file(a.x_star);
  if (X0.rows() != Xs.rows() || X0.cols() != Xs.cols()) {
    throw DimensionError("X0 and X_star must have the same shape");
  }
  OracleConfig cfg;
  cfg.enumeration_cap = a.cap;
  cfg.sr_mode = parse_sr_mode(a.sr_mode);
  cfg.tol = g.tol();
  const RecoverabilityVerdict v = recoverability(X0, Xs, a.rank, a.n1, cfg);
  out << json{{"ms", v.ms_k_minus_1}, {"nr", v.nr}, {"sr", number_or_inf(v.sr)}, {"solvable", v.solvable}}
             .dump()
      << '\n';
}

// grid / bench ---------------------------------------------------------------

struct GridArgs {
  GridSpec spec;
  std::string attack = "negated_model";
  fs::path out;
  std::optional<fs::path> aggregate_out;
};

void cmd_grid(GridArgs a, const Globals& g, std::ostream& out) {
  a.spec.base.attack.kind = parse_attack_kind(a.attack);
  a.spec.base.seed = g.seed;
  a.spec.tol = g.tol();
  const auto reports = run_grid(a.spec, g.jobs);
  write_table_file(a.out, reports_table(reports));
  const fs::path agg = a.aggregate_out ? *a.aggregate_out
                                       : a.out.parent_path() / (a.out.stem().string() + "_aggregate.csv");
  write_table_file(agg, aggregate_table(aggregate(reports)));
  out << json{{"detail", a.out.string()}, {"aggregate", agg.string()}, {"rows", reports.size()}}.dump()
      << '\n';
}

struct BenchArgs {
  BenchSpec spec;
  fs::path out;
};

void cmd_bench(BenchArgs a, const Globals& g, std::ostream& out) {
  a.spec.seed = g.seed;
  a.spec.tol = g.tol();
  const auto rows = run_bench(a.spec);
  write_table_file(a.out, bench_table(rows));
  out << json{{"out", a.out.string()}, {"rows", rows.size()}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Poisoning-robust regression via trimmed subspace recovery"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads for grid runs")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-rank-eps", g.rank_eps, "Relative singular value cutoff")
      ->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a poisoned synthetic dataset");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();
  gen_cmd->add_option("--n", gen.cfg.n, "Pristine rows")->capture_default_str();
  gen_cmd->add_option("--n1", gen.cfg.n1, "Adversarial rows")->capture_default_str();
  gen_cmd->add_option("--k", gen.cfg.k, "Rank of the pristine features")->capture_default_str();
  add_synthetic_flags(gen_cmd, gen.cfg, gen.attack);

  RecoverArgs rec;
  auto* rec_cmd = app.add_subcommand("recover", "Recover the pristine row space of X");
  rec_cmd->add_option("--input", rec.input, "Matrix CSV")->required();
  rec_cmd->add_option("--keep", rec.keep, "Rows to keep (n)")->required();
  rec_cmd->add_option("--rank", rec.rank, "Subspace rank (k)")->required();
  rec_cmd->add_option("--restarts", rec.restarts)->capture_default_str();
  rec_cmd->add_option("--mode", rec.mode, "efficient or exact")->capture_default_str();
  rec_cmd->add_option("--cap", rec.cap, "Row cap for exact mode")->capture_default_str();
  rec_cmd->add_option("--out", rec.out_dir, "Directory for basis.csv and kept.json");
  rec_cmd->add_option("--truth", rec.truth, "truth.json for reporting ident_rate");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Trimmed principal component regression");
  fit_cmd->add_option("--x", fit.x, "Feature matrix CSV")->required();
  fit_cmd->add_option("--y", fit.y, "Label vector CSV")->required();
  fit_cmd->add_option("--keep", fit.keep, "Rows to keep (n)")->required();
  fit_cmd->add_option("--rank", fit.rank, "Subspace rank (k)")->required();
  fit_cmd->add_option("--restarts", fit.restarts)->capture_default_str();
  fit_cmd->add_option("--basis-mode", fit.basis_mode, "efficient or exact")->capture_default_str();
  fit_cmd->add_option("--cap", fit.cap, "Row cap for exact mode")->capture_default_str();
  fit_cmd->add_option("--predictions", fit.predictions, "Write X * beta_hat here");
  fit_cmd->add_option("--json", fit.out_json, "Also write the result JSON here");

  BaselineArgs base;
  auto* base_cmd = app.add_subcommand("baseline", "OLS or ridge on every row");
  base_cmd->add_option("--x", base.x, "Feature matrix CSV")->required();
  base_cmd->add_option("--y", base.y, "Label vector CSV")->required();
  base_cmd->add_option("--method", base.method, "ols or ridge")->capture_default_str();
  base_cmd->add_option("--lambda", base.lambda, "Ridge penalty")->capture_default_str();
  base_cmd->add_option("--predictions", base.predictions, "Write X * beta_hat here");
  base_cmd->add_option("--json", base.out_json, "Also write the result JSON here");

  OracleArgs orc;
  auto* orc_cmd = app.add_subcommand("oracle", "Brute-force recoverability quantities");
  orc_cmd->add_option("--x0", orc.x0, "Noisy pristine matrix CSV")->required();
  orc_cmd->add_option("--x-star", orc.x_star, "Noise-free pristine matrix CSV")->required();
  orc_cmd->add_option("--rank", orc.rank, "Rank k")->required();
  orc_cmd->add_option("--n1", orc.n1, "Adversarial row count")->required();
  orc_cmd->add_option("--sr-mode", orc.sr_mode, "skip or perturb")->capture_default_str();
  orc_cmd->add_option("--cap", orc.cap, "Enumeration cap")->capture_default_str();

  GridArgs grid;
  grid.spec.base.label_noise_std = 0.1;
  auto* grid_cmd = app.add_subcommand("grid", "RMSE grid over rank and corruption count");
  grid_cmd->add_option("--k-values", grid.spec.k_values, "Ranks")->required()->delimiter(',');
  grid_cmd->add_option("--n1-values", grid.spec.n1_values, "Adversarial counts")->required()->delimiter(',');
  grid_cmd->add_option("--trials", grid.spec.trials)->capture_default_str();
  grid_cmd->add_option("--rows", grid.spec.total_rows, "n + n1")->capture_default_str();
  grid_cmd->add_option("--restarts", grid.spec.restarts)->capture_default_str();
  grid_cmd->add_option("--eval-rows", grid.spec.eval_rows)->capture_default_str();
  grid_cmd->add_option("--lambda", grid.spec.ridge.lambda, "Ridge penalty")->capture_default_str();
  add_synthetic_flags(grid_cmd, grid.spec.base, grid.attack);
  grid_cmd->add_option("--out", grid.out, "Per-trial CSV")->required();
  grid_cmd->add_option("--aggregate", grid.aggregate_out, "Aggregate CSV (default <out>_aggregate.csv)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Time recover_efficient over row counts");
  bench_cmd->add_option("--sizes", bench.spec.sizes, "Ascending row counts")->required()->delimiter(',');
  bench_cmd->add_option("--rank", bench.spec.rank)->capture_default_str();
  bench_cmd->add_option("--n1", bench.spec.n1)->capture_default_str();
  bench_cmd->add_option("--m", bench.spec.m)->capture_default_str();
  bench_cmd->add_option("--feature-noise", bench.spec.feature_noise_std)->capture_default_str();
  bench_cmd->add_option("--restarts", bench.spec.restarts)->capture_default_str();
  bench_cmd->add_option("--out", bench.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_cmd) cmd_gen(gen, g, out);
    else if (*rec_cmd) cmd_recover(rec, g, out);
    else if (*fit_cmd) cmd_fit(fit, g, out);
    else if (*base_cmd) cmd_baseline(base, g, out);
    else if (*orc_cmd) cmd_oracle(orc, g, out);
    else if (*grid_cmd) cmd_grid(grid, g, out);
    else if (*bench_cmd) cmd_bench(bench, g, out);
    return kOk;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kDimensionError;
  } catch (const CapExceededError& e) {
    err << "error: " << e.what() << '\n';
    return kCapExceeded;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace trimpcr::cli
