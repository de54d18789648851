#include "edc/eigenspace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/SVD>

namespace edc::eigenspace {

namespace {

void fix_sign(Eigen::Ref<Vector> column) {
  Eigen::Index arg = 0;
  column.cwiseAbs().maxCoeff(&arg);
  if (column[arg] < 0.0) column = -column;
}

// Appends orthonormal columns until `basis` is square. Each new column is the
// standard basis vector with the largest residual after projecting out the
// current columns (lowest index on ties), orthogonalised twice.
void complete_basis(Matrix& basis, Eigen::Index rank) {
  const Eigen::Index n = basis.rows();
  for (Eigen::Index k = rank; k < n; ++k) {
    const auto current = basis.leftCols(k);
    Vector best;
    double best_norm = -1.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      Vector e = Vector::Unit(n, i);
      if (k > 0) e -= current * (current.transpose() * e);
      const double norm = e.norm();
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(e);
      }
    }
    if (k > 0) best -= current * (current.transpose() * best);
    basis.col(k) = best.normalized();
  }
}

void check_rows(const Basis& basis, const Matrix& p, const char* what) {
  if (p.rows() != basis.u.rows()) {
    throw std::invalid_argument(std::string(what) + ": block has " + std::to_string(p.rows()) +
                                " rows, basis dimension is " + std::to_string(basis.u.rows()));
  }
}

}  // namespace

SolutionPool::SolutionPool(int dimension, int capacity_generations, int per_generation)
    : dimension_(dimension), capacity_(capacity_generations), per_generation_(per_generation) {
  if (dimension < 1 || capacity_generations < 1 || per_generation < 1) {
    throw std::invalid_argument("solution pool needs positive dimension, capacity and set size");
  }
  data_.resize(dimension, static_cast<Eigen::Index>(capacity_generations) * per_generation);
}

void SolutionPool::update(const Matrix& h) {
  if (h.rows() != dimension_ || h.cols() != per_generation_) {
    throw std::invalid_argument("pool update: expected " + std::to_string(dimension_) + "x" +
                                std::to_string(per_generation_) + " block, got " +
                                std::to_string(h.rows()) + "x" + std::to_string(h.cols()));
  }
  data_.middleCols(static_cast<Eigen::Index>(next_) * per_generation_, per_generation_) = h;
  next_ = (next_ + 1) % capacity_;
  if (filled_ < capacity_) ++filled_;
}

Matrix SolutionPool::set_by_age(int age) const {
  if (age < 0 || age >= filled_) throw std::out_of_range("pool age out of range");
  const int slot = ((next_ - 1 - age) % capacity_ + capacity_) % capacity_;
  return data_.middleCols(static_cast<Eigen::Index>(slot) * per_generation_, per_generation_);
}

Basis Basis::identity(int n) { return Basis{Matrix::Identity(n, n), 0, true}; }

Basis basis_from_samples(const Matrix& samples, long generation) {
  const Eigen::Index n = samples.rows();
  if (n < 1 || samples.cols() < 1) throw std::invalid_argument("basis: empty sample block");

  const Vector mean = samples.rowwise().mean();
  const Matrix centred = samples.colwise() - mean;

  Matrix u(n, n);
  Eigen::Index rank = 0;
  const double max_abs = centred.cwiseAbs().maxCoeff();
  if (max_abs > 0.0) {
    Eigen::BDCSVD<Matrix> svd(centred, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success) {
      throw std::runtime_error("basis: SVD did not converge at generation " +
                               std::to_string(generation));
    }
    const Vector& sigma = svd.singularValues();
    const double tol = sigma[0] * static_cast<double>(std::max(n, samples.cols())) *
                       std::numeric_limits<double>::epsilon();
    while (rank < sigma.size() && sigma[rank] > tol) ++rank;
    u.leftCols(rank) = svd.matrixU().leftCols(rank);
  }
  complete_basis(u, rank);
  for (Eigen::Index j = 0; j < n; ++j) fix_sign(u.col(j));
  return Basis{std::move(u), generation, false};
}

Basis compute_basis(const SolutionPool& pool, long generation) {
  if (!pool.full()) {
    throw std::logic_error("basis: pool holds " + std::to_string(pool.filled()) + " of " +
                           std::to_string(pool.capacity()) + " sets");
  }
  return basis_from_samples(pool.stored(), generation);
}

Matrix forward_transform(const Basis& basis, const Matrix& p) {
  check_rows(basis, p, "forward transform");
  if (basis.is_identity) return p;
  return basis.u.transpose() * p;
}

Matrix backward_transform(const Basis& basis, const Matrix& p_eigen) {
  check_rows(basis, p_eigen, "backward transform");
  if (basis.is_identity) return p_eigen;
  return basis.u * p_eigen;
}

}  // namespace edc::eigenspace
