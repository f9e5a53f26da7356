#include <gtest/gtest.h>

#include <cmath>

#include "builders.hpp"
#include "oracles.hpp"
#include "trimpcr/datagen.hpp"
#include "trimpcr/errors.hpp"
#include "trimpcr/residual_oracles.hpp"
#include "trimpcr/subspace_recovery.hpp"

using namespace trimpcr;

namespace {

OrthonormalBasis basis_of(const DenseMatrix& M) {
  return OrthonormalBasis::from_rows(orthonormal_row_space(M));
}

RecoveryResult with_kept(std::vector<std::size_t> kept, std::size_t universe) {
  return RecoveryResult{.basis = OrthonormalBasis::from_rows(DenseMatrix{{1.0}}),
                        .kept = IndexSet(std::move(kept), universe)};
}

}  // namespace

TEST(SpanDistance, Examples) {
  const auto e1 = OrthonormalBasis::from_rows(DenseMatrix{{1.0, 0.0}});
  const auto e2 = OrthonormalBasis::from_rows(DenseMatrix{{0.0, 1.0}});
  EXPECT_DOUBLE_EQ(span_distance(e1, e1), 0.0);
  EXPECT_NEAR(span_distance(e1, e2), std::sqrt(2.0), 1e-15);
  const auto e3 = OrthonormalBasis::from_rows(DenseMatrix{{1.0, 0.0, 0.0}});
  EXPECT_THROW(span_distance(e1, e3), DimensionError);
}

TEST(SpanDistance, InvariantUnderRotationAndPermutation) {
  oracle::Engine eng(1);
  const auto a = basis_of(oracle::gaussian(3, 6, eng));
  const Eigen::HouseholderQR<DenseMatrix> qr(oracle::gaussian(3, 3, eng));
  const DenseMatrix R = qr.householderQ();
  EXPECT_LE(span_distance(a, OrthonormalBasis::from_rows(R * a.rows())), 1e-9);
  DenseMatrix swapped = a.rows();
  swapped.row(0).swap(swapped.row(2));
  EXPECT_LE(span_distance(a, OrthonormalBasis::from_rows(swapped)), 1e-9);
}

TEST(IdentificationRate, Examples) {
  const IndexSet adversarial({4, 5, 6, 7}, 8);
  EXPECT_DOUBLE_EQ(identification_rate(with_kept({0, 1, 2, 3}, 8), adversarial), 1.0);
  EXPECT_DOUBLE_EQ(identification_rate(with_kept({4, 5, 6, 7}, 8), adversarial), 0.0);
  EXPECT_DOUBLE_EQ(identification_rate(with_kept({0, 1, 2, 4}, 8), adversarial), 0.75);
  EXPECT_DOUBLE_EQ(identification_rate(with_kept({0, 1}, 8), IndexSet({}, 8)), 1.0);
  EXPECT_THROW(identification_rate(with_kept({0}, 8), IndexSet({1}, 9)), std::invalid_argument);
}

TEST(RecoveryOptions, Validation) {
  RecoveryOptions o;
  EXPECT_NO_THROW(o.validate());
  o.restarts = 0;
  EXPECT_THROW(o.validate(), std::invalid_argument);
}

TEST(RecoverNoiseFree, CleanLowRankKeepsEverything) {
  oracle::Engine eng(2);
  const DenseMatrix X = oracle::gaussian(8, 2, eng) * oracle::gaussian(2, 5, eng);
  const auto r = recover_noise_free(X, 8, 2);
  EXPECT_EQ(r.result.kept, IndexSet::all(8));
  EXPECT_LE(r.result.residual, 1e-8 * X.norm());
  EXPECT_LE(span_distance(r.result.basis, basis_of(X)), 1e-6);
  EXPECT_EQ(r.distinct_spans, 1u);
}

TEST(RecoverNoiseFree, UniqueSpanBelowThreshold) {
  oracle::Engine eng(3);
  int checked = 0;
  for (int t = 0; checked < 30; ++t) {
    const int k = 1 + t % 3;
    const int n = 7;
    oracle::NoiseFreeInstance inst;
    if (!oracle::build_noise_free(k, 4, n, t % 3, 0, eng, inst)) continue;
    const int n1 = n - inst.ms - 1;
    if (n1 < 1) continue;
    if (!oracle::build_noise_free(k, 4, n, t % 3, n1, eng, inst) || n1 + inst.ms >= n) continue;
    const auto r = recover_noise_free(inst.X, static_cast<std::size_t>(n),
                                      static_cast<std::size_t>(k));
    EXPECT_LE(span_distance(r.result.basis, basis_of(inst.X_star)), 1e-6) << "t=" << t;
    EXPECT_EQ(r.distinct_spans, 1u);
    ++checked;
  }
}

TEST(RecoverNoiseFree, AmbiguousAboveThreshold) {
  oracle::Engine eng(4);
  int checked = 0;
  for (int t = 0; checked < 20; ++t) {
    const int k = 2 + t % 2;
    const int n = 7;
    oracle::NoiseFreeInstance probe;
    if (!oracle::build_noise_free(k, 5, n, 2, 0, eng, probe)) continue;
    const int n1 = n - probe.ms;
    oracle::NoiseFreeInstance inst;
    if (!oracle::build_noise_free(k, 5, n, 2, n1, eng, inst) || n1 + inst.ms < n) continue;
    const auto r = recover_noise_free(inst.X, static_cast<std::size_t>(n),
                                      static_cast<std::size_t>(k));
    EXPECT_GE(r.distinct_spans, 2u);
    EXPECT_EQ(numeric_rank(select_rows(inst.X, r.result.kept)), static_cast<std::size_t>(k));
    EXPECT_LE(r.result.residual, 1e-8 * inst.X.norm());
    ++checked;
  }
}

TEST(RecoverNoiseFree, FailsWithoutRankKSubset) {
  const DenseMatrix X = DenseMatrix::Identity(4, 4).topRows(3);
  EXPECT_THROW(recover_noise_free(X, 2, 3), NumericalError);
  EXPECT_THROW(recover_noise_free(DenseMatrix::Ones(17, 2), 10, 1), CapExceededError);
}

TEST(RecoverExact, MatchesEnumerationOracle) {
  oracle::Engine eng(5);
  for (int t = 0; t < 20; ++t) {
    const DenseMatrix X = oracle::gaussian(6, 3, eng);
    const auto r = recover_exact(X, 5, 2);
    const auto want = oracle::min_rank_k_subset(X, 5, 2);
    EXPECT_NEAR(r.residual, want.residual, 1e-9);
    EXPECT_EQ(r.kept.indices(), oracle::mask_indices(want.best, 6));
    EXPECT_EQ(r.kept.size(), 5u);
    EXPECT_NEAR(r.residual,
                (select_rows(X, r.kept) - select_rows(r.U_full, r.kept) * r.basis.rows()).norm(),
                1e-9);
  }
}

TEST(RecoverExact, AgreesWithNoiseFreeOnSolvableInstances) {
  oracle::Engine eng(6);
  int checked = 0;
  for (int t = 0; checked < 10; ++t) {
    oracle::NoiseFreeInstance inst;
    if (!oracle::build_noise_free(2, 4, 8, 0, 2, eng, inst) || 2 + inst.ms >= 8) continue;
    const auto a = recover_noise_free(inst.X, 8, 2);
    const auto b = recover_exact(inst.X, 8, 2);
    EXPECT_LE(span_distance(a.result.basis, b.basis), 1e-6);
    ++checked;
  }
}

TEST(RecoverExact, RecoversWhenSubmatrixResidualExceedsNoise) {
  oracle::Engine eng(7);
  int checked = 0;
  for (int t = 0; checked < 10 && t < 200; ++t) {
    const auto inst = oracle::build_noisy(2, 5, 8, 2, 1e-9, t % 2 == 0, eng);
    const auto v = recoverability(inst.X0, inst.X_star, 2, 2);
    if (!v.solvable) continue;
    const auto r = recover_exact(inst.X, 8, 2);
    EXPECT_LE(span_distance(r.basis, basis_of(inst.X_star)), 1e-6) << "t=" << t;
    ++checked;
  }
  EXPECT_EQ(checked, 10);
}

TEST(RecoverEfficient, CleanLowRank) {
  oracle::Engine eng(8);
  const DenseMatrix X = oracle::gaussian(30, 3, eng) * oracle::gaussian(3, 12, eng);
  const auto r = recover_efficient(X, 30, 3);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_LE(span_distance(r.basis, basis_of(X)), 1e-6);
  EXPECT_EQ(r.effective_rank, 3u);
  EXPECT_EQ(r.U_full.rows(), 30);
  EXPECT_EQ(r.basis.rank(), 3u);
}

TEST(RecoverEfficient, PadsWhenRankExceedsIntrinsic) {
  oracle::Engine eng(9);
  const DenseMatrix X = oracle::gaussian(20, 2, eng) * oracle::gaussian(2, 8, eng);
  const auto r = recover_efficient(X, 20, 4);
  EXPECT_EQ(r.basis.rank(), 4u);
  EXPECT_EQ(r.effective_rank, 2u);
  EXPECT_LE(r.residual, 1e-6);
  EXPECT_LE((r.basis.rows() * r.basis.rows().transpose() - DenseMatrix::Identity(4, 4))
                .cwiseAbs()
                .maxCoeff(),
            1e-9);
}

TEST(RecoverEfficient, AgreesWithExactOnSmallInstances) {
  oracle::Engine eng(10);
  int agree = 0;
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::build_noisy(2, 5, 9, 3, 0.05, t % 2 == 0, eng);
    RecoveryOptions opts;
    opts.seed = static_cast<std::uint64_t>(t);
    const auto exact = recover_exact(inst.X, 9, 2, opts);
    const auto eff = recover_efficient(inst.X, 9, 2, opts);
    EXPECT_GE(eff.residual, exact.residual - 1e-9);
    if (eff.residual <= exact.residual + 1e-6) ++agree;
  }
  EXPECT_GE(agree, 90);
}

TEST(RecoverEfficient, DeterministicUnderSeed) {
  oracle::Engine eng(11);
  const auto inst = oracle::build_noisy(3, 10, 40, 10, 0.01, false, eng);
  RecoveryOptions opts;
  opts.seed = 123;
  const auto a = recover_efficient(inst.X, 40, 3, opts);
  const auto b = recover_efficient(inst.X, 40, 3, opts);
  EXPECT_EQ(a.kept, b.kept);
  EXPECT_EQ(a.basis.rows(), b.basis.rows());
  EXPECT_EQ(a.residual, b.residual);
}

TEST(RecoverEfficient, ContractViolations) {
  const DenseMatrix X = DenseMatrix::Ones(5, 3);
  EXPECT_THROW(recover_efficient(X, 6, 1), std::invalid_argument);
  EXPECT_THROW(recover_efficient(X, 0, 1), std::invalid_argument);
  EXPECT_THROW(recover_efficient(X, 5, 4), std::invalid_argument);
  EXPECT_THROW(recover_efficient(X, 5, 0), std::invalid_argument);
}

TEST(RecoverEfficient, TrimsEveryAdversarialRowOnGeneratedData) {
  SyntheticConfig cfg;
  cfg.n = 80;
  cfg.n1 = 20;
  cfg.m = 100;
  cfg.k = 4;
  cfg.feature_noise_std = 0.0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    cfg.seed = seed;
    const auto ds = assemble(cfg);
    RecoveryOptions opts;
    opts.seed = seed;
    const auto r = recover_efficient(ds.X, cfg.n, cfg.k, opts);
    EXPECT_DOUBLE_EQ(identification_rate(r, ds.adversarial), 1.0);
    EXPECT_LE(span_distance(r.basis, basis_of(ds.X_star)), 1e-6);
  }
}
