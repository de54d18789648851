#include "edc/grouping.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace edc::grouping {

Grouping::Grouping(std::vector<int> permutation, int subproblem_size)
    : permutation_(std::move(permutation)), subproblem_size_(subproblem_size) {
  const int n = dimension();
  if (subproblem_size < 1 || subproblem_size > n) {
    throw std::invalid_argument("grouping: subproblem size must lie in [1, " + std::to_string(n) +
                                "], got " + std::to_string(subproblem_size));
  }
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int idx : permutation_) {
    if (idx < 0 || idx >= n || seen[static_cast<std::size_t>(idx)]) {
      throw std::invalid_argument("grouping: not a permutation of 0.." + std::to_string(n - 1));
    }
    seen[static_cast<std::size_t>(idx)] = 1;
  }
  for (int start = 0; start < n; start += subproblem_size) {
    offsets_.push_back(start);
    sizes_.push_back(std::min(subproblem_size, n - start));
  }
}

Grouping Grouping::single(int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  return Grouping(std::move(perm), n);
}

std::span<const int> Grouping::group(int i) const {
  const auto k = static_cast<std::size_t>(i);
  return std::span<const int>(permutation_).subspan(static_cast<std::size_t>(offsets_.at(k)),
                                                    static_cast<std::size_t>(sizes_[k]));
}

Grouping random_grouping(int n, int s, Rng& rng) {
  if (n < 1 || s < 1 || s > n) {
    throw std::invalid_argument("random grouping needs 1 <= s <= n (n=" + std::to_string(n) +
                                ", s=" + std::to_string(s) + ")");
  }
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  return Grouping(std::move(perm), s);
}

std::vector<Matrix> split_block(const Grouping& g, const Matrix& block) {
  if (block.rows() != g.dimension()) {
    throw std::invalid_argument("split: block has " + std::to_string(block.rows()) +
                                " rows, grouping dimension is " + std::to_string(g.dimension()));
  }
  std::vector<Matrix> out;
  out.reserve(static_cast<std::size_t>(g.group_count()));
  for (int i = 0; i < g.group_count(); ++i) {
    const auto rows = g.group(i);
    Matrix sub(static_cast<Eigen::Index>(rows.size()), block.cols());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      sub.row(static_cast<Eigen::Index>(j)) = block.row(rows[j]);
    }
    out.push_back(std::move(sub));
  }
  return out;
}

Matrix merge_block(const Grouping& g, std::span<const Matrix> subblocks) {
  if (static_cast<int>(subblocks.size()) != g.group_count()) {
    throw std::invalid_argument("merge: expected " + std::to_string(g.group_count()) +
                                " sub-blocks, got " + std::to_string(subblocks.size()));
  }
  const Eigen::Index cols = subblocks.empty() ? 0 : subblocks.front().cols();
  Matrix block(g.dimension(), cols);
  for (int i = 0; i < g.group_count(); ++i) {
    const auto rows = g.group(i);
    const Matrix& sub = subblocks[static_cast<std::size_t>(i)];
    if (sub.rows() != static_cast<Eigen::Index>(rows.size()) || sub.cols() != cols) {
      throw std::invalid_argument("merge: sub-block " + std::to_string(i) + " has shape " +
                                  std::to_string(sub.rows()) + "x" + std::to_string(sub.cols()) +
                                  ", expected " + std::to_string(rows.size()) + "x" +
                                  std::to_string(cols));
    }
    for (std::size_t j = 0; j < rows.size(); ++j) {
      block.row(rows[j]) = sub.row(static_cast<Eigen::Index>(j));
    }
  }
  return block;
}

}  // namespace edc::grouping
