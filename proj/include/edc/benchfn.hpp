#pragma once

// Shifted / rotated benchmark functions with a known optimum of value 0.
//
// Every function is evaluated as base(z) with z = R (x - o). Grouped rotation
// splits x into consecutive slices of `group_size` coordinates (the last slice
// may be shorter) and sums the base family over the slices, each with its own
// rotation. This covers the separable, nonseparable and partially separable
// categories of the large-scale test suites without their data files.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edc/rng.hpp"
#include "edc/types.hpp"

namespace edc::benchfn {

enum class Family { Sphere, Schwefel12, Elliptic, Rastrigin, Ackley, Rosenbrock };

enum class RotationKind { None, Full, Grouped };

struct Rotation {
  RotationKind kind = RotationKind::None;
  int group_size = 0;  // only meaningful for Grouped
};

struct FunctionSpec {
  Family family = Family::Sphere;
  int dimension = 2;
  bool shifted = true;
  Rotation rotation;
  std::uint64_t seed = 0;
  Bounds bounds{-100.0, 100.0};
};

/// Conventional search box of a family.
Bounds default_bounds(Family family);

/// Spec with the family's conventional bounds filled in.
FunctionSpec make_spec(Family family, int dimension, bool shifted = true, Rotation rotation = {},
                       std::uint64_t seed = 0);

std::string_view family_name(Family family);
std::optional<Family> parse_family(std::string_view name);
std::string_view rotation_name(RotationKind kind);
std::optional<RotationKind> parse_rotation(std::string_view name);

/// Throws std::invalid_argument when the spec violates its invariants.
void validate(const FunctionSpec& spec);

/// Unshifted, unrotated family value at z.
double base_value(Family family, const Eigen::Ref<const Vector>& z);

/// Haar-style random orthonormal matrix: QR of a standard Gaussian matrix
/// with the triangular factor's diagonal made positive.
Matrix random_rotation(int n, Rng& rng);

class BenchmarkFunction {
 public:
  explicit BenchmarkFunction(FunctionSpec spec);

  const FunctionSpec& spec() const { return spec_; }
  int dimension() const { return spec_.dimension; }
  const Bounds& bounds() const { return spec_.bounds; }
  const Vector& shift() const { return shift_; }
  const std::vector<Matrix>& rotations() const { return rotations_; }
  const Vector& optimum_point() const { return optimum_; }
  double optimum_value() const { return 0.0; }

  /// Fitness of x. Throws std::invalid_argument on dimension mismatch.
  double evaluate(const Eigen::Ref<const Vector>& x) const;
  double operator()(const Eigen::Ref<const Vector>& x) const { return evaluate(x); }

  /// Fitness of every column of `block`.
  Vector evaluate_columns(const Matrix& block) const;

  /// Raw error value max(fitness - optimum, 0). No reporting floor here.
  double fev(double fitness) const;

  /// Start index and length of rotated slice g (one slice unless Grouped).
  std::pair<int, int> slice(std::size_t g) const;

 private:
  FunctionSpec spec_;
  Vector shift_;
  std::vector<Matrix> rotations_;
  Vector optimum_;
};

BenchmarkFunction make_function(const FunctionSpec& spec);

/// {family, dimension, shifted, rotation, group_size?, seed}
nlohmann::json spec_to_json(const FunctionSpec& spec);

/// Inverse of spec_to_json. Throws std::invalid_argument naming the bad field.
FunctionSpec spec_from_json(const nlohmann::json& j);

}  // namespace edc::benchfn
