#include "edc/benchfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/QR>
#include <nlohmann/json.hpp>

namespace edc::benchfn {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double sphere(const Eigen::Ref<const Vector>& z) { return z.squaredNorm(); }

double schwefel12(const Eigen::Ref<const Vector>& z) {
  double partial = 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    partial += z[i];
    sum += partial * partial;
  }
  return sum;
}

double elliptic(const Eigen::Ref<const Vector>& z) {
  const auto n = z.size();
  if (n == 1) return z[0] * z[0];
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double exponent = static_cast<double>(i) / static_cast<double>(n - 1);
    sum += std::pow(1e6, exponent) * z[i] * z[i];
  }
  return sum;
}

double rastrigin(const Eigen::Ref<const Vector>& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    sum += z[i] * z[i] - 10.0 * std::cos(kTwoPi * z[i]) + 10.0;
  }
  return sum;
}

double ackley(const Eigen::Ref<const Vector>& z) {
  const double n = static_cast<double>(z.size());
  double cos_sum = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) cos_sum += std::cos(kTwoPi * z[i]);
  const double value = -20.0 * std::exp(-0.2 * std::sqrt(z.squaredNorm() / n)) -
                       std::exp(cos_sum / n) + 20.0 + std::numbers::e;
  // exp(0) terms do not cancel exactly in floating point
  return std::max(value, 0.0);
}

double rosenbrock(const Eigen::Ref<const Vector>& z) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i + 1 < z.size(); ++i) {
    const double a = z[i] * z[i] - z[i + 1];
    const double b = z[i] - 1.0;
    sum += 100.0 * a * a + b * b;
  }
  return sum;
}

}  // namespace

Bounds default_bounds(Family family) {
  switch (family) {
    case Family::Rastrigin:
      return {-5.0, 5.0};
    case Family::Ackley:
      return {-32.0, 32.0};
    case Family::Sphere:
    case Family::Schwefel12:
    case Family::Elliptic:
    case Family::Rosenbrock:
      break;
  }
  return {-100.0, 100.0};
}

FunctionSpec make_spec(Family family, int dimension, bool shifted, Rotation rotation,
                       std::uint64_t seed) {
  return FunctionSpec{family, dimension, shifted, rotation, seed, default_bounds(family)};
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Sphere: return "sphere";
    case Family::Schwefel12: return "schwefel12";
    case Family::Elliptic: return "elliptic";
    case Family::Rastrigin: return "rastrigin";
    case Family::Ackley: return "ackley";
    case Family::Rosenbrock: return "rosenbrock";
  }
  return "unknown";
}

std::optional<Family> parse_family(std::string_view name) {
  for (Family f : {Family::Sphere, Family::Schwefel12, Family::Elliptic, Family::Rastrigin,
                   Family::Ackley, Family::Rosenbrock}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view rotation_name(RotationKind kind) {
  switch (kind) {
    case RotationKind::None: return "none";
    case RotationKind::Full: return "full";
    case RotationKind::Grouped: return "grouped";
  }
  return "unknown";
}

std::optional<RotationKind> parse_rotation(std::string_view name) {
  for (RotationKind k : {RotationKind::None, RotationKind::Full, RotationKind::Grouped}) {
    if (rotation_name(k) == name) return k;
  }
  return std::nullopt;
}

void validate(const FunctionSpec& spec) {
  if (spec.dimension < 2) {
    throw std::invalid_argument("benchmark dimension must be >= 2, got " +
                                std::to_string(spec.dimension));
  }
  if (!(spec.bounds.lower < spec.bounds.upper)) {
    throw std::invalid_argument("benchmark bounds require lower < upper");
  }
  if (spec.rotation.kind == RotationKind::Grouped &&
      (spec.rotation.group_size < 1 || spec.rotation.group_size > spec.dimension)) {
    throw std::invalid_argument("grouped rotation needs 1 <= group_size <= dimension, got " +
                                std::to_string(spec.rotation.group_size));
  }
}

double base_value(Family family, const Eigen::Ref<const Vector>& z) {
  switch (family) {
    case Family::Sphere: return sphere(z);
    case Family::Schwefel12: return schwefel12(z);
    case Family::Elliptic: return elliptic(z);
    case Family::Rastrigin: return rastrigin(z);
    case Family::Ackley: return ackley(z);
    case Family::Rosenbrock: return rosenbrock(z);
  }
  throw std::invalid_argument("unknown benchmark family");
}

Matrix random_rotation(int n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

BenchmarkFunction::BenchmarkFunction(FunctionSpec spec) : spec_(spec) {
  validate(spec_);
  const int n = spec_.dimension;
  Rng rng(spec_.seed);

  shift_ = Vector::Zero(n);
  if (spec_.shifted) {
    const double margin = 0.1 * (spec_.bounds.upper - spec_.bounds.lower);
    std::uniform_real_distribution<double> uniform(spec_.bounds.lower + margin,
                                                   spec_.bounds.upper - margin);
    for (int i = 0; i < n; ++i) shift_[i] = uniform(rng);
  }

  switch (spec_.rotation.kind) {
    case RotationKind::None:
      break;
    case RotationKind::Full:
      rotations_.push_back(random_rotation(n, rng));
      break;
    case RotationKind::Grouped: {
      const int s = spec_.rotation.group_size;
      for (int start = 0; start < n; start += s) {
        rotations_.push_back(random_rotation(std::min(s, n - start), rng));
      }
      break;
    }
  }

  optimum_ = shift_;
  if (spec_.family == Family::Rosenbrock) {
    // base optimum sits at z = 1, so x* = o + R^T 1 per slice
    if (rotations_.empty()) {
      optimum_.array() += 1.0;
    } else {
      for (std::size_t g = 0; g < rotations_.size(); ++g) {
        const auto [start, len] = slice(g);
        optimum_.segment(start, len) += rotations_[g].transpose() * Vector::Ones(len);
      }
    }
  }
}

std::pair<int, int> BenchmarkFunction::slice(std::size_t g) const {
  if (spec_.rotation.kind != RotationKind::Grouped) return {0, spec_.dimension};
  const int s = spec_.rotation.group_size;
  const int start = static_cast<int>(g) * s;
  return {start, std::min(s, spec_.dimension - start)};
}

double BenchmarkFunction::evaluate(const Eigen::Ref<const Vector>& x) const {
  if (x.size() != spec_.dimension) {
    throw std::invalid_argument("evaluate: expected vector of length " +
                                std::to_string(spec_.dimension) + ", got " +
                                std::to_string(x.size()));
  }
  const Vector d = x - shift_;
  switch (spec_.rotation.kind) {
    case RotationKind::None:
      return base_value(spec_.family, d);
    case RotationKind::Full:
      return base_value(spec_.family, rotations_.front() * d);
    case RotationKind::Grouped: {
      double sum = 0.0;
      for (std::size_t g = 0; g < rotations_.size(); ++g) {
        const auto [start, len] = slice(g);
        sum += base_value(spec_.family, rotations_[g] * d.segment(start, len));
      }
      return sum;
    }
  }
  return 0.0;
}

Vector BenchmarkFunction::evaluate_columns(const Matrix& block) const {
  Vector out(block.cols());
  for (Eigen::Index j = 0; j < block.cols(); ++j) out[j] = evaluate(block.col(j));
  return out;
}

double BenchmarkFunction::fev(double fitness) const {
  return std::max(fitness - optimum_value(), 0.0);
}

BenchmarkFunction make_function(const FunctionSpec& spec) { return BenchmarkFunction(spec); }

nlohmann::json spec_to_json(const FunctionSpec& spec) {
  nlohmann::json j{{"family", family_name(spec.family)},
                   {"dimension", spec.dimension},
                   {"shifted", spec.shifted},
                   {"rotation", rotation_name(spec.rotation.kind)},
                   {"seed", spec.seed}};
  if (spec.rotation.kind == RotationKind::Grouped) j["group_size"] = spec.rotation.group_size;
  return j;
}

FunctionSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("function: expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "family" && key != "dimension" && key != "shifted" && key != "rotation" &&
        key != "group_size" && key != "seed") {
      throw std::invalid_argument("function." + key + ": unknown field");
    }
  }
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!j.contains(name)) {
      throw std::invalid_argument(std::string("function.") + name + ": missing field");
    }
    return j.at(name);
  };

  const auto& family_json = field("family");
  if (!family_json.is_string()) throw std::invalid_argument("function.family: expected string");
  const auto family = parse_family(family_json.get<std::string>());
  if (!family) {
    throw std::invalid_argument("function.family: unknown family '" +
                                family_json.get<std::string>() + "'");
  }

  const auto& dim_json = field("dimension");
  if (!dim_json.is_number_integer()) {
    throw std::invalid_argument("function.dimension: expected integer");
  }

  bool shifted = true;
  if (j.contains("shifted")) {
    if (!j["shifted"].is_boolean()) throw std::invalid_argument("function.shifted: expected bool");
    shifted = j["shifted"].get<bool>();
  }

  Rotation rotation;
  if (j.contains("rotation")) {
    if (!j["rotation"].is_string()) {
      throw std::invalid_argument("function.rotation: expected string");
    }
    const auto kind = parse_rotation(j["rotation"].get<std::string>());
    if (!kind) {
      throw std::invalid_argument("function.rotation: expected none|full|grouped");
    }
    rotation.kind = *kind;
  }
  if (rotation.kind == RotationKind::Grouped) {
    const auto& gs = field("group_size");
    if (!gs.is_number_integer()) {
      throw std::invalid_argument("function.group_size: expected integer");
    }
    rotation.group_size = gs.get<int>();
  }

  std::uint64_t seed = 0;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw std::invalid_argument("function.seed: expected unsigned integer");
    }
    if (j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() < 0) {
      throw std::invalid_argument("function.seed: expected unsigned integer");
    }
    seed = j["seed"].get<std::uint64_t>();
  }

  auto spec = make_spec(*family, dim_json.get<int>(), shifted, rotation, seed);
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("function: ") + e.what());
  }
  return spec;
}

}  // namespace edc::benchfn
