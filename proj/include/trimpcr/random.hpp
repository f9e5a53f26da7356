#pragma once

#include <cstdint>
#include <random>

#include "trimpcr/index_set.hpp"
#include "trimpcr/matrix_core.hpp"

namespace trimpcr {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Independent stream seed derived from (seed, stream) via splitmix64.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seed for restart r of a multistart run; restart 0 reuses `seed` itself so
/// a single restart reproduces the plain solver.
std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart);

/// rows x cols matrix of independent N(0, 1) draws (row-major draw order).
DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
Vector gaussian_vector(Eigen::Index size, Rng& rng);

/// Uniformly random subset of the given size.
IndexSet random_subset(std::size_t universe, std::size_t size, Rng& rng);

}  // namespace trimpcr
