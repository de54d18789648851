#pragma once

#include <Eigen/Core>

namespace edc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box, identical for every coordinate.
struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double v) const { return v >= lower && v <= upper; }
};

/// Coordinate-wise min(max(x_i, lower), upper).
Vector clamp_to_bounds(const Vector& x, const Bounds& bounds);

/// Column-wise clamp of a block of solutions, in place.
void clamp_columns(Matrix& block, const Bounds& bounds);

}  // namespace edc
