#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "trimpcr/index_set.hpp"
#include "trimpcr/matrix_core.hpp"
#include "trimpcr/random.hpp"

namespace trimpcr {

enum class AttackKind {
  negated_model,  // y = -magnitude * X_adv beta_star
  shifted_model,  // y = X_adv beta_star + magnitude
  random_model,   // y = X_adv beta_r, beta_r ~ magnitude * N(0, I)
};

AttackKind parse_attack_kind(std::string_view text);
std::string_view to_string(AttackKind kind);

struct AttackSpec {
  AttackKind kind = AttackKind::negated_model;
  double magnitude = 1.0;
};

struct SyntheticConfig {
  std::size_t n = 350;
  std::size_t n1 = 50;
  std::size_t m = 400;
  std::size_t k = 10;
  double feature_noise_std = 0.1;
  double label_noise_std = 0.1;
  AttackSpec attack;
  std::uint64_t seed = kDefaultSeed;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
  double gamma() const { return static_cast<double>(n1) / static_cast<double>(n); }
  /// Clamp applied to the feature noise, 4 standard deviations.
  double epsilon() const { return 4.0 * feature_noise_std; }
};

struct PristineDraw {
  DenseMatrix X_star;  // n x m, U * B
  DenseMatrix U;       // n x k
  DenseMatrix B;       // k x m
  Vector beta_star;    // m
  Vector y_star;       // n
};

struct AdversarialDraw {
  DenseMatrix X_adv;  // n1 x m
  Vector y_adv;       // n1
  DenseMatrix B_adv;  // k x m
};

struct PoisonedDataset {
  DenseMatrix X;  // (n + n1) x m, shuffled
  Vector y;
  DenseMatrix X_star;  // n x m, generation order
  DenseMatrix noise;   // n x m, X_0 = X_star + noise
  DenseMatrix B;       // generating basis of X_star (k x m, not orthonormal)
  Vector beta_star;
  IndexSet pristine;
  IndexSet adversarial;
  /// position[j] is the row of X holding stacked row j of [X_0; X_adv].
  std::vector<std::size_t> position;
  double epsilon = 0.0;
  SyntheticConfig config;
};

PristineDraw gen_pristine(const SyntheticConfig& cfg);

/// B_adv copies floor(k/2) rows of X_star and draws the rest fresh, so its
/// span overlaps span(X_star) without equalling it.
AdversarialDraw gen_adversarial(const SyntheticConfig& cfg, const PristineDraw& pristine);

PoisonedDataset assemble(const SyntheticConfig& cfg);

struct EvalSet {
  DenseMatrix X;
  Vector y;
};

/// Fresh pristine rows on the same basis with noiseless labels.
EvalSet gen_eval_set(const SyntheticConfig& cfg, const Vector& beta_star, const DenseMatrix& B,
                     std::size_t rows);

/// Writes X.csv, y.csv and truth.json into `dir` (created if needed).
void save_dataset(const std::filesystem::path& dir, const PoisonedDataset& ds);

struct DatasetTruth {
  Vector beta_star;
  IndexSet pristine;
  IndexSet adversarial;
  DenseMatrix B;
  double epsilon = 0.0;
  SyntheticConfig config;
};

DatasetTruth load_truth(const std::filesystem::path& truth_json);

}  // namespace trimpcr
