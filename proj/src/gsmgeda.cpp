#include "edc/gsmgeda.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

namespace edc::gsmgeda {

Vector log_rank_weights(int count) {
  Vector w(count);
  const double top = std::log(static_cast<double>(count) + 1.0);
  for (int i = 0; i < count; ++i) w[i] = top - std::log(static_cast<double>(i) + 1.0);
  return w;
}

Vector weighted_mean(const Matrix& h_sorted) {
  if (h_sorted.cols() < 1 || h_sorted.rows() < 1) {
    throw std::invalid_argument("weighted mean: empty solution block");
  }
  const Vector w = log_rank_weights(static_cast<int>(h_sorted.cols()));
  return (h_sorted * w) / w.sum();
}

ShiftResult shift_mean(const Vector& mean_tilde, MeanTracker& tracker, double eta_f, double eta_b,
                       const Objective& objective, const std::optional<Bounds>& bounds) {
  if (!tracker.initialized) throw std::logic_error("mean shift: tracker is not initialized");
  if (tracker.prev_mean.size() != mean_tilde.size()) {
    throw std::invalid_argument("mean shift: dimension mismatch with previous mean");
  }
  if (!(eta_f > 0.0) || !(eta_b > 0.0)) {
    throw std::invalid_argument("mean shift: shifting factors must be positive");
  }

  auto admissible = [&](Vector v) { return bounds ? clamp_to_bounds(v, *bounds) : v; };

  const Vector delta = mean_tilde - tracker.prev_mean;
  ShiftResult result{mean_tilde, objective(mean_tilde), 1};

  if (result.fitness < tracker.prev_fitness) {
    Vector forward = admissible(mean_tilde + eta_f * delta);
    const double f_forward = objective(forward);
    ++result.fe_used;
    if (f_forward < result.fitness) {
      result.mean = std::move(forward);
      result.fitness = f_forward;
    }
  } else if (result.fitness > tracker.prev_fitness) {
    Vector backward = admissible(mean_tilde - eta_b * delta);
    const double f_backward = objective(backward);
    ++result.fe_used;
    if (f_backward < result.fitness) {
      result.mean = std::move(backward);
      result.fitness = f_backward;
    }
  }

  tracker.reset(result.mean, result.fitness);
  return result;
}

Matrix estimate_covariance(const Matrix& h_sub, const Vector& mean_sub) {
  if (h_sub.cols() < 1) throw std::invalid_argument("covariance: empty solution block");
  if (h_sub.rows() != mean_sub.size()) {
    throw std::invalid_argument("covariance: block has " + std::to_string(h_sub.rows()) +
                                " rows, mean has " + std::to_string(mean_sub.size()));
  }
  const Matrix dev = h_sub.colwise() - mean_sub;
  Matrix c = (dev * dev.transpose()) / static_cast<double>(h_sub.cols());
  return 0.5 * (c + c.transpose());
}

GaussianModel build_model(const Vector& mean, const Matrix& covariance) {
  const auto d = mean.size();
  if (covariance.rows() != d || covariance.cols() != d) {
    throw std::invalid_argument("model: covariance shape does not match mean");
  }
  if (!covariance.allFinite()) throw std::runtime_error("model: covariance is not finite");

  GaussianModel model{mean, covariance, Matrix(), 0.0};
  Eigen::LLT<Matrix> llt(covariance);
  if (llt.info() == Eigen::Success) {
    model.factor = llt.matrixL();
    return model;
  }

  const double scale = std::max(covariance.trace() / static_cast<double>(d), 1.0);
  for (double jitter = 1e-10 * scale; jitter <= 1e-2 * scale * (1.0 + 1e-9); jitter *= 10.0) {
    Matrix jittered = covariance;
    jittered.diagonal().array() += jitter;
    llt.compute(jittered);
    if (llt.info() == Eigen::Success) {
      model.factor = llt.matrixL();
      model.jitter = jitter;
      return model;
    }
  }
  throw std::runtime_error("model: covariance not factorizable even with jitter " +
                           std::to_string(1e-2 * scale));
}

Matrix sample(const GaussianModel& model, int count, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = model.mean.size();
  Matrix z(d, count);
  for (int j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) z(i, j) = normal(rng);
  }
  Matrix out = model.factor.triangularView<Eigen::Lower>() * z;
  out.colwise() += model.mean;
  return out;
}

double log_density(const GaussianModel& model, const Vector& x) {
  const auto d = model.mean.size();
  if (x.size() != d) throw std::invalid_argument("log density: dimension mismatch");
  const Vector diag = model.factor.diagonal();
  if ((diag.array() <= 0.0).any()) {
    throw std::domain_error("log density: singular covariance factor");
  }
  const Vector y = model.factor.triangularView<Eigen::Lower>().solve(x - model.mean);
  const double log_det = 2.0 * diag.array().log().sum();
  return -0.5 * (static_cast<double>(d) * std::log(2.0 * std::numbers::pi) + log_det +
                 y.squaredNorm());
}

}  // namespace edc::gsmgeda
