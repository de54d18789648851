#pragma once

// Gaussian EDA building blocks: log-rank weighted mean, evolution-direction
// mean shift, covariance around a reference mean, and a Cholesky-factored
// Gaussian model for sampling.

#include <functional>
#include <optional>

#include "edc/rng.hpp"
#include "edc/types.hpp"

namespace edc::gsmgeda {

using Objective = std::function<double(const Vector&)>;

/// w_i = log(count + 1) - log(i), i = 1..count. Strictly decreasing, positive.
Vector log_rank_weights(int count);

/// Weighted average of the columns of a best-first sorted block.
/// Throws std::invalid_argument on an empty block.
Vector weighted_mean(const Matrix& h_sorted);

/// Previous generation's final mean and its fitness.
struct MeanTracker {
  Vector prev_mean;
  double prev_fitness = 0.0;
  bool initialized = false;

  void reset(Vector mean, double fitness) {
    prev_mean = std::move(mean);
    prev_fitness = fitness;
    initialized = true;
  }
};

struct ShiftResult {
  Vector mean;
  double fitness = 0.0;
  int fe_used = 0;
};

/// Shifts `mean_tilde` along delta = mean_tilde - tracker.prev_mean.
///
/// f(mean_tilde) is always evaluated. If it improves on the previous mean the
/// forward candidate mean_tilde + eta_f * delta is tried; if it is worse the
/// backward candidate mean_tilde - eta_b * delta is tried. A candidate is kept
/// only when strictly better than mean_tilde. On a tie no candidate is
/// evaluated. Candidates are clamped when `bounds` is given. The tracker is
/// updated to the returned mean.
ShiftResult shift_mean(const Vector& mean_tilde, MeanTracker& tracker, double eta_f, double eta_b,
                       const Objective& objective, const std::optional<Bounds>& bounds = {});

/// (1/|H|) sum_i (H_i - mean)(H_i - mean)^T, symmetrised.
Matrix estimate_covariance(const Matrix& h_sub, const Vector& mean_sub);

struct GaussianModel {
  Vector mean;
  Matrix covariance;
  Matrix factor;  // lower triangular, factor * factor^T = covariance + jitter * I
  double jitter = 0.0;

  int dim() const { return static_cast<int>(mean.size()); }
};

/// Cholesky of the covariance, retrying with jitter
/// 1e-10 * max(trace/d, 1), x10 per step, up to 1e-2 * max(trace/d, 1).
/// Throws std::runtime_error if even the largest jitter fails.
GaussianModel build_model(const Vector& mean, const Matrix& covariance);

/// `count` columns mean + L z, z ~ N(0, I) drawn column by column.
Matrix sample(const GaussianModel& model, int count, Rng& rng);

/// Log of the Gaussian density under the (jittered) model covariance.
/// Throws std::domain_error if the factor has a non-positive diagonal entry.
double log_density(const GaussianModel& model, const Vector& x);

}  // namespace edc::gsmgeda
