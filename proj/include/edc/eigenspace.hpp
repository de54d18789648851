#pragma once

// Solution pool of recent high-quality sets and the orthonormal basis of its
// left singular vectors. Transforms are plain U^T / U products; the pool mean
// removed before the SVD is not re-applied.

#include "edc/types.hpp"

namespace edc::eigenspace {

/// Ring buffer of the last `capacity_generations` selected sets, each an
/// n x per_generation column block. Stored contiguously as one
/// n x (capacity * per_generation) matrix; slot k occupies columns
/// [k * per_generation, (k + 1) * per_generation).
class SolutionPool {
 public:
  SolutionPool() = default;
  SolutionPool(int dimension, int capacity_generations, int per_generation);

  /// Stores `h`, evicting the oldest set once the pool is full.
  /// Throws std::invalid_argument on a wrong block shape.
  void update(const Matrix& h);

  int dimension() const { return dimension_; }
  int capacity() const { return capacity_; }
  int per_generation() const { return per_generation_; }
  int filled() const { return filled_; }
  bool full() const { return filled_ == capacity_; }
  Eigen::Index stored_columns() const {
    return static_cast<Eigen::Index>(filled_) * per_generation_;
  }

  /// Set inserted `age` updates ago (0 = most recent).
  Matrix set_by_age(int age) const;

  /// All stored columns (slot order, not insertion order).
  auto stored() const { return data_.leftCols(stored_columns()); }

 private:
  int dimension_ = 0;
  int capacity_ = 0;
  int per_generation_ = 0;
  int filled_ = 0;
  int next_ = 0;  // slot written by the next update
  Matrix data_;
};

struct Basis {
  Matrix u;
  long built_at_generation = 0;
  bool is_identity = true;

  static Basis identity(int n);
  int dimension() const { return static_cast<int>(u.rows()); }
};

/// Left singular vectors of the column-centred samples, ordered by descending
/// singular value. Null-space directions (rank < n) are completed to a full
/// orthonormal basis. Every column is sign-fixed so that its largest-magnitude
/// entry is positive.
Basis basis_from_samples(const Matrix& samples, long generation);

/// basis_from_samples over the pool. Throws std::logic_error if not full.
Basis compute_basis(const SolutionPool& pool, long generation);

/// U^T P. Throws std::invalid_argument on row mismatch.
Matrix forward_transform(const Basis& basis, const Matrix& p);

/// U P'. Throws std::invalid_argument on row mismatch.
Matrix backward_transform(const Basis& basis, const Matrix& p_eigen);

}  // namespace edc::eigenspace
