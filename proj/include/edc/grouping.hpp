#pragma once

#include <span>
#include <vector>

#include "edc/rng.hpp"
#include "edc/types.hpp"

namespace edc::grouping {

/// Partition of n (zero-based) indices into m = ceil(n / s) consecutive slices
/// of a permutation. The first m - 1 groups have s members; the last has the
/// remainder.
class Grouping {
 public:
  /// Throws std::invalid_argument unless `permutation` is a permutation of
  /// 0..n-1 and 1 <= subproblem_size <= n.
  Grouping(std::vector<int> permutation, int subproblem_size);

  /// Identity permutation in a single group.
  static Grouping single(int n);

  int dimension() const { return static_cast<int>(permutation_.size()); }
  int group_count() const { return static_cast<int>(sizes_.size()); }
  int subproblem_size() const { return subproblem_size_; }
  const std::vector<int>& permutation() const { return permutation_; }
  const std::vector<int>& group_sizes() const { return sizes_; }

  /// Original indices belonging to group i, in permutation order.
  std::span<const int> group(int i) const;

 private:
  std::vector<int> permutation_;
  std::vector<int> sizes_;
  std::vector<int> offsets_;
  int subproblem_size_ = 0;
};

/// Uniformly random grouping (Fisher-Yates via std::shuffle).
Grouping random_grouping(int n, int s, Rng& rng);

/// Row j of block i is row group(i)[j] of `block`.
std::vector<Matrix> split_block(const Grouping& g, const Matrix& block);

/// Inverse of split_block.
Matrix merge_block(const Grouping& g, std::span<const Matrix> subblocks);

}  // namespace edc::grouping
