#include "trimpcr/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace trimpcr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x632BE59BD9B4E019ULL));
}

std::uint64_t restart_seed(std::uint64_t seed, std::size_t restart) {
  return restart == 0 ? seed : derive_seed(seed, 0x5245535441525400ULL + restart);
}

DenseMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix M(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) M(i, j) = normal(rng);
  }
  return M;
}

Vector gaussian_vector(Eigen::Index size, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = normal(rng);
  return v;
}

IndexSet random_subset(std::size_t universe, std::size_t size, Rng& rng) {
  if (size > universe) throw std::invalid_argument("random_subset: size exceeds universe");
  std::vector<std::size_t> pool(universe);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  // Partial Fisher-Yates; std::shuffle's draw pattern is unspecified.
  for (std::size_t i = 0; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, universe - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  pool.resize(size);
  return IndexSet(std::move(pool), universe);
}

}  // namespace trimpcr
