#include "trimpcr/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "trimpcr/errors.hpp"
#include "trimpcr/matrix_io.hpp"

namespace trimpcr {

namespace {

enum Stream : std::uint64_t { kPristine = 1, kAdversarial = 2, kNoise = 3, kShuffle = 4, kEval = 5 };

constexpr int kMaxAttempts = 100;

}  // namespace

AttackKind parse_attack_kind(std::string_view text) {
  if (text == "negated_model") return AttackKind::negated_model;
  if (text == "shifted_model") return AttackKind::shifted_model;
  if (text == "random_model") return AttackKind::random_model;
  throw std::invalid_argument("unknown attack kind '" + std::string(text) + "'");
}

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::negated_model: return "negated_model";
    case AttackKind::shifted_model: return "shifted_model";
    case AttackKind::random_model: return "random_model";
  }
  return "negated_model";
}

void SyntheticConfig::validate() const {
  if (k < 1 || k > std::min(n, m)) {
    throw std::invalid_argument("synthetic config: k must lie in [1, min(n, m)]");
  }
  if (!(feature_noise_std >= 0.0) || !std::isfinite(feature_noise_std) ||
      !(label_noise_std >= 0.0) || !std::isfinite(label_noise_std)) {
    throw std::invalid_argument("synthetic config: noise levels must be finite and >= 0");
  }
  if (!std::isfinite(attack.magnitude)) {
    throw std::invalid_argument("synthetic config: attack magnitude must be finite");
  }
}

PristineDraw gen_pristine(const SyntheticConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, kPristine));
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto m = static_cast<Eigen::Index>(cfg.m);
  const auto k = static_cast<Eigen::Index>(cfg.k);
  PristineDraw out;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) throw NumericalError("gen_pristine: could not draw rank-k factors");
    out.U = gaussian_matrix(n, k, rng);
    out.B = gaussian_matrix(k, m, rng);
    if (numeric_rank(out.U) == cfg.k && numeric_rank(out.B) == cfg.k) break;
  }
  out.X_star = out.U * out.B;
  out.beta_star = gaussian_vector(m, rng);
  out.y_star = out.X_star * out.beta_star;
  return out;
}

AdversarialDraw gen_adversarial(const SyntheticConfig& cfg, const PristineDraw& pristine) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, kAdversarial));
  const auto m = static_cast<Eigen::Index>(cfg.m);
  const auto k = static_cast<Eigen::Index>(cfg.k);
  const auto copied = static_cast<Eigen::Index>(cfg.k / 2);
  const OrthonormalBasis star = orthonormalize(pristine.B);

  AdversarialDraw out;
  for (int attempt = 0;; ++attempt) {
    if (attempt == kMaxAttempts) {
      throw NumericalError("gen_adversarial: could not draw a distinct rank-k basis");
    }
    out.B_adv = DenseMatrix(k, m);
    const IndexSet rows = random_subset(cfg.n, static_cast<std::size_t>(copied), rng);
    for (Eigen::Index i = 0; i < copied; ++i) {
      out.B_adv.row(i) = pristine.X_star.row(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)]));
    }
    out.B_adv.bottomRows(k - copied) = gaussian_matrix(k - copied, m, rng);
    if (numeric_rank(out.B_adv) != cfg.k) continue;
    const OrthonormalBasis adv = orthonormalize(out.B_adv);
    if ((adv.projector() - star.projector()).norm() > 1e-6) break;
  }
  const DenseMatrix U_adv = gaussian_matrix(static_cast<Eigen::Index>(cfg.n1), k, rng);
  out.X_adv = U_adv * out.B_adv;
  switch (cfg.attack.kind) {
    case AttackKind::negated_model:
      out.y_adv = -cfg.attack.magnitude * (out.X_adv * pristine.beta_star);
      break;
    case AttackKind::shifted_model:
      out.y_adv = (out.X_adv * pristine.beta_star).array() + cfg.attack.magnitude;
      break;
    case AttackKind::random_model:
      out.y_adv = out.X_adv * (cfg.attack.magnitude * gaussian_vector(m, rng));
      break;
  }
  return out;
}

PoisonedDataset assemble(const SyntheticConfig& cfg) {
  cfg.validate();
  const PristineDraw pristine = gen_pristine(cfg);
  const AdversarialDraw adv = gen_adversarial(cfg, pristine);
  const auto n = static_cast<Eigen::Index>(cfg.n);
  const auto n1 = static_cast<Eigen::Index>(cfg.n1);
  const auto m = static_cast<Eigen::Index>(cfg.m);

  PoisonedDataset ds;
  ds.config = cfg;
  ds.epsilon = cfg.epsilon();
  ds.X_star = pristine.X_star;
  ds.B = pristine.B;
  ds.beta_star = pristine.beta_star;

  Rng noise_rng(derive_seed(cfg.seed, kNoise));
  ds.noise = (cfg.feature_noise_std * gaussian_matrix(n, m, noise_rng)).cwiseMax(-ds.epsilon).cwiseMin(ds.epsilon);
  const Vector label_noise = cfg.label_noise_std * gaussian_vector(n, noise_rng);

  Rng shuffle_rng(derive_seed(cfg.seed, kShuffle));
  const std::size_t total = cfg.n + cfg.n1;
  ds.position.resize(total);
  std::iota(ds.position.begin(), ds.position.end(), std::size_t{0});
  // Fisher-Yates with the shared uniform integer draw, so the order depends
  // only on the seed.
  for (std::size_t i = total; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(ds.position[i - 1], ds.position[pick(shuffle_rng)]);
  }

  ds.X = DenseMatrix(n + n1, m);
  ds.y = Vector(n + n1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto row = static_cast<Eigen::Index>(ds.position[static_cast<std::size_t>(j)]);
    ds.X.row(row) = pristine.X_star.row(j) + ds.noise.row(j);
    ds.y(row) = pristine.y_star(j) + label_noise(j);
  }
  for (Eigen::Index j = 0; j < n1; ++j) {
    const auto row = static_cast<Eigen::Index>(ds.position[static_cast<std::size_t>(n + j)]);
    ds.X.row(row) = adv.X_adv.row(j);
    ds.y(row) = adv.y_adv(j);
  }
  ds.pristine = IndexSet({ds.position.begin(), ds.position.begin() + n}, total);
  ds.adversarial = IndexSet({ds.position.begin() + n, ds.position.end()}, total);
  return ds;
}

EvalSet gen_eval_set(const SyntheticConfig& cfg, const Vector& beta_star, const DenseMatrix& B,
                     std::size_t rows) {
  if (B.cols() != beta_star.size()) {
    throw DimensionError("gen_eval_set: basis and beta_star disagree on the feature count");
  }
  Rng rng(derive_seed(cfg.seed, kEval));
  EvalSet out;
  out.X = gaussian_matrix(static_cast<Eigen::Index>(rows), B.rows(), rng) * B;
  out.y = out.X * beta_star;
  return out;
}

namespace {

using nlohmann::json;

json matrix_to_json(const DenseMatrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json config_to_json(const SyntheticConfig& cfg) {
  return {{"n", cfg.n},
          {"n1", cfg.n1},
          {"m", cfg.m},
          {"k", cfg.k},
          {"feature_noise_std", cfg.feature_noise_std},
          {"label_noise_std", cfg.label_noise_std},
          {"attack", std::string(to_string(cfg.attack.kind))},
          {"magnitude", cfg.attack.magnitude},
          {"seed", cfg.seed}};
}

}  // namespace

void save_dataset(const std::filesystem::path& dir, const PoisonedDataset& ds) {
  std::filesystem::create_directories(dir);
  write_matrix_file(dir / "X.csv", ds.X);
  write_vector_file(dir / "y.csv", ds.y);
  json truth;
  truth["beta_star"] = std::vector<double>(ds.beta_star.data(), ds.beta_star.data() + ds.beta_star.size());
  truth["pristine"] = ds.pristine.indices();
  truth["adversarial"] = ds.adversarial.indices();
  truth["epsilon"] = ds.epsilon;
  truth["gamma"] = ds.config.gamma();
  truth["basis"] = matrix_to_json(ds.B);
  truth["config"] = config_to_json(ds.config);
  std::ofstream out(dir / "truth.json");
  if (!out) throw InputError("cannot write " + (dir / "truth.json").string());
  out << truth.dump(1) << '\n';
}

DatasetTruth load_truth(const std::filesystem::path& truth_json) {
  std::ifstream in(truth_json);
  if (!in) throw InputError("cannot open input file: " + truth_json.string());
  try {
    const json j = json::parse(in);
    DatasetTruth t;
    const auto beta = j.at("beta_star").get<std::vector<double>>();
    t.beta_star = Eigen::Map<const Vector>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    const auto& cfg = j.at("config");
    t.config.n = cfg.at("n").get<std::size_t>();
    t.config.n1 = cfg.at("n1").get<std::size_t>();
    t.config.m = cfg.at("m").get<std::size_t>();
    t.config.k = cfg.at("k").get<std::size_t>();
    t.config.feature_noise_std = cfg.at("feature_noise_std").get<double>();
    t.config.label_noise_std = cfg.at("label_noise_std").get<double>();
    t.config.attack.kind = parse_attack_kind(cfg.at("attack").get<std::string>());
    t.config.attack.magnitude = cfg.at("magnitude").get<double>();
    t.config.seed = cfg.at("seed").get<std::uint64_t>();
    const std::size_t total = t.config.n + t.config.n1;
    t.pristine = IndexSet(j.at("pristine").get<std::vector<std::size_t>>(), total);
    t.adversarial = IndexSet(j.at("adversarial").get<std::vector<std::size_t>>(), total);
    t.epsilon = j.at("epsilon").get<double>();
    const auto rows = j.at("basis").get<std::vector<std::vector<double>>>();
    t.B = DenseMatrix(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.config.m));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != t.config.m) throw InputError("truth.json: basis row has the wrong length");
      for (std::size_t c = 0; c < t.config.m; ++c) {
        t.B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
      }
    }
    return t;
  } catch (const json::exception& e) {
    throw InputError("malformed " + truth_json.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError("malformed " + truth_json.string() + ": " + e.what());
  }
}

}  // namespace trimpcr
