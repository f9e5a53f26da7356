#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trimpcr/matrix_core.hpp"

namespace trimpcr {

/// Sorted, distinct row indices drawn from {0, ..., universe - 1}.
class IndexSet {
 public:
  IndexSet() = default;
  /// Sorts the input; throws std::invalid_argument on duplicates or
  /// out-of-range entries.
  IndexSet(std::vector<std::size_t> indices, std::size_t universe);

  static IndexSet all(std::size_t universe);
  /// Indices of the true entries of a mask.
  static IndexSet from_mask(const std::vector<bool>& mask);

  std::size_t size() const { return indices_.size(); }
  bool empty() const { return indices_.empty(); }
  std::size_t universe() const { return universe_; }
  std::size_t operator[](std::size_t i) const { return indices_[i]; }
  const std::vector<std::size_t>& indices() const { return indices_; }
  auto begin() const { return indices_.begin(); }
  auto end() const { return indices_.end(); }

  bool contains(std::size_t index) const;
  IndexSet complement() const;
  /// Binary assignment tau with tau[i] = 1 iff i is in the set.
  std::vector<std::uint8_t> mask() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::size_t universe_ = 0;
};

std::size_t intersection_size(const IndexSet& a, const IndexSet& b);

DenseMatrix select_rows(const DenseMatrix& M, const IndexSet& rows);
Vector select_rows(const Vector& v, const IndexSet& rows);

}  // namespace trimpcr
