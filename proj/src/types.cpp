#include "edc/types.hpp"

namespace edc {

Vector clamp_to_bounds(const Vector& x, const Bounds& bounds) {
  return x.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
}

void clamp_columns(Matrix& block, const Bounds& bounds) {
  block = block.cwiseMax(bounds.lower).cwiseMin(bounds.upper);
}

}  // namespace edc
