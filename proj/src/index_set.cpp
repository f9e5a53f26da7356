#include "trimpcr/index_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace trimpcr {

IndexSet::IndexSet(std::vector<std::size_t> indices, std::size_t universe)
    : indices_(std::move(indices)), universe_(universe) {
  std::sort(indices_.begin(), indices_.end());
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end()) {
    throw std::invalid_argument("IndexSet: duplicate index");
  }
  if (!indices_.empty() && indices_.back() >= universe_) {
    throw std::invalid_argument("IndexSet: index " + std::to_string(indices_.back()) +
                                " outside universe of " + std::to_string(universe_));
  }
}

IndexSet IndexSet::all(std::size_t universe) {
  std::vector<std::size_t> idx(universe);
  for (std::size_t i = 0; i < universe; ++i) idx[i] = i;
  return IndexSet(std::move(idx), universe);
}

IndexSet IndexSet::from_mask(const std::vector<bool>& mask) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) idx.push_back(i);
  }
  return IndexSet(std::move(idx), mask.size());
}

bool IndexSet::contains(std::size_t index) const {
  return std::binary_search(indices_.begin(), indices_.end(), index);
}

IndexSet IndexSet::complement() const {
  std::vector<std::size_t> out;
  out.reserve(universe_ - indices_.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < universe_; ++i) {
    if (j < indices_.size() && indices_[j] == i) {
      ++j;
    } else {
      out.push_back(i);
    }
  }
  return IndexSet(std::move(out), universe_);
}

std::vector<std::uint8_t> IndexSet::mask() const {
  std::vector<std::uint8_t> tau(universe_, 0);
  for (std::size_t i : indices_) tau[i] = 1;
  return tau;
}

std::size_t intersection_size(const IndexSet& a, const IndexSet& b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

DenseMatrix select_rows(const DenseMatrix& M, const IndexSet& rows) {
  if (rows.universe() > static_cast<std::size_t>(M.rows())) {
    throw std::invalid_argument("select_rows: index set universe exceeds row count");
  }
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = M.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

Vector select_rows(const Vector& v, const IndexSet& rows) {
  if (rows.universe() > static_cast<std::size_t>(v.size())) {
    throw std::invalid_argument("select_rows: index set universe exceeds vector length");
  }
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

}  // namespace trimpcr
