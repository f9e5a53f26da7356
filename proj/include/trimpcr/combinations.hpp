#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

namespace trimpcr {

/// Calls visit(indices) for every size-r subset of {0, ..., n-1} in
/// lexicographic order. Stops early when visit returns false.
template <class Visit>
void for_each_combination(std::size_t n, std::size_t r, Visit&& visit) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    if (!visit(static_cast<const std::vector<std::size_t>&>(idx))) return;
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

/// Binomial coefficient, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t r);

}  // namespace trimpcr
