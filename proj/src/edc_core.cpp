#include "edc/edc_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "edc/grouping.hpp"

namespace edc::core {

namespace {

// Charges one evaluation: bumps the counter, updates the incumbent and emits
// any checkpoint reached.
void account(EdcState& state, const benchfn::BenchmarkFunction& f, const Vector& x,
             double fitness) {
  ++state.fe_count;
  if (fitness < state.best.fitness) {
    state.best.x = x;
    state.best.fitness = fitness;
  }
  while (state.next_checkpoint < state.checkpoints.size() &&
         state.checkpoints[state.next_checkpoint] <= state.fe_count) {
    if (state.checkpoints[state.next_checkpoint] == state.fe_count) {
      state.trace.record(state.fe_count, f.fev(state.best.fitness));
    }
    ++state.next_checkpoint;
  }
}

double evaluate(EdcState& state, const benchfn::BenchmarkFunction& f, const Vector& x) {
  const double fitness = f.evaluate(x);
  account(state, f, x, fitness);
  return fitness;
}

}  // namespace

int selection_size(const EdcConfig& cfg) {
  return static_cast<int>(std::floor(cfg.selection_ratio * cfg.population_size));
}

void validate(const EdcConfig& cfg, int dimension) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("edc config: " + msg); };
  if (cfg.population_size < 2) fail("population_size must be >= 2");
  if (!(cfg.selection_ratio > 0.0 && cfg.selection_ratio < 1.0)) {
    fail("selection_ratio must lie in (0, 1)");
  }
  if (selection_size(cfg) < 2) fail("floor(selection_ratio * population_size) must be >= 2");
  if (cfg.pool_generations < 1) fail("pool_generations must be >= 1");
  if (cfg.decompose_enabled && (cfg.subproblem_size < 1 || cfg.subproblem_size > dimension)) {
    fail("subproblem_size must lie in [1, " + std::to_string(dimension) + "]");
  }
  if (!(cfg.eta_forward > 0.0) || !(cfg.eta_backward > 0.0)) {
    fail("eta_forward and eta_backward must be positive");
  }
  if (cfg.max_fes < static_cast<long>(cfg.population_size) + 1) {
    fail("max_fes must be at least population_size + 1");
  }
}

void ConvergenceTrace::record(long fe_count, double best_fev) {
  if (!points.empty() && points.back().fe_count == fe_count) return;
  points.push_back({fe_count, best_fev});
}

EdcState initialize(const EdcConfig& cfg, const benchfn::BenchmarkFunction& f) {
  const int n = f.dimension();
  validate(cfg, n);
  const int p = cfg.population_size;

  EdcState state;
  state.rng = Rng(cfg.seed);
  state.checkpoints = cfg.report_checkpoints;
  std::sort(state.checkpoints.begin(), state.checkpoints.end());
  state.checkpoints.erase(std::unique(state.checkpoints.begin(), state.checkpoints.end()),
                          state.checkpoints.end());
  state.basis = eigenspace::Basis::identity(n);
  if (cfg.transform_enabled) {
    state.pool = eigenspace::SolutionPool(n, cfg.pool_generations, selection_size(cfg));
  }

  std::uniform_real_distribution<double> uniform(f.bounds().lower, f.bounds().upper);
  state.population.resize(n, p);
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) state.population(i, j) = uniform(state.rng);
  }

  state.best.fitness = std::numeric_limits<double>::infinity();
  state.fitness = f.evaluate_columns(state.population);
  for (int j = 0; j < p; ++j) account(state, f, state.population.col(j), state.fitness[j]);

  Vector mean = state.population.rowwise().mean();
  const double mean_fitness = evaluate(state, f, mean);
  state.tracker.reset(std::move(mean), mean_fitness);

  state.generation = 1;
  state.trace.record(state.fe_count, f.fev(state.best.fitness));
  return state;
}

std::vector<int> ranking(const Vector& fitness, int count) {
  std::vector<int> order(static_cast<std::size_t>(fitness.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return fitness[a] < fitness[b]; });
  order.resize(static_cast<std::size_t>(std::min<Eigen::Index>(count, fitness.size())));
  return order;
}

Matrix select_top(const EdcState& state, const EdcConfig& cfg) {
  const auto order = ranking(state.fitness, selection_size(cfg));
  Matrix h(state.population.rows(), static_cast<Eigen::Index>(order.size()));
  for (std::size_t k = 0; k < order.size(); ++k) {
    h.col(static_cast<Eigen::Index>(k)) = state.population.col(order[k]);
  }
  return h;
}

void step_generation(EdcState& state, const EdcConfig& cfg, const benchfn::BenchmarkFunction& f) {
  const int n = f.dimension();
  const int p = cfg.population_size;
  const long t = state.generation;
  const auto gen = static_cast<std::uint64_t>(t);

  const Matrix h = select_top(state, cfg);

  if (cfg.transform_enabled) {
    state.pool.update(h);
    if (t % cfg.pool_generations == 0 && state.pool.full()) {
      state.basis = eigenspace::compute_basis(state.pool, t);
    }
  }

  const gsmgeda::Objective objective = [&](const Vector& x) { return evaluate(state, f, x); };
  const auto shifted = gsmgeda::shift_mean(gsmgeda::weighted_mean(h), state.tracker,
                                           cfg.eta_forward, cfg.eta_backward, objective,
                                           f.bounds());

  Matrix h_eigen = h;
  Matrix mean_eigen = shifted.mean;
  if (cfg.transform_enabled) {
    h_eigen = eigenspace::forward_transform(state.basis, h);
    mean_eigen = eigenspace::forward_transform(state.basis, mean_eigen);
  }

  // one group stays in natural order
  const bool decompose = cfg.decompose_enabled && cfg.subproblem_size < n;
  grouping::Grouping groups = grouping::Grouping::single(n);
  if (decompose) {
    Rng grouping_rng = child_stream(cfg.seed, gen, StreamKind::Grouping);
    groups = grouping::random_grouping(n, cfg.subproblem_size, grouping_rng);
  }
  const auto h_parts = grouping::split_block(groups, h_eigen);
  const auto mean_parts = grouping::split_block(groups, mean_eigen);

  std::vector<Matrix> offspring_parts(h_parts.size());
  for (std::size_t i = 0; i < h_parts.size(); ++i) {
    const Vector mean_i = mean_parts[i].col(0);
    gsmgeda::GaussianModel model;
    try {
      model = gsmgeda::build_model(mean_i, gsmgeda::estimate_covariance(h_parts[i], mean_i));
    } catch (const std::exception& e) {
      throw std::runtime_error("generation " + std::to_string(t) + ", group " +
                               std::to_string(i) + ": " + e.what());
    }
    Rng sampling_rng = child_stream(cfg.seed, gen, StreamKind::Sampling, i);
    offspring_parts[i] = gsmgeda::sample(model, p - 1, sampling_rng);
  }

  Matrix offspring = grouping::merge_block(groups, offspring_parts);
  if (cfg.transform_enabled) offspring = eigenspace::backward_transform(state.basis, offspring);
  clamp_columns(offspring, f.bounds());

  const Vector offspring_fitness = f.evaluate_columns(offspring);
  for (int j = 0; j < p - 1; ++j) account(state, f, offspring.col(j), offspring_fitness[j]);

  state.population.leftCols(p - 1) = offspring;
  state.population.col(p - 1) = state.best.x;
  state.fitness.head(p - 1) = offspring_fitness;
  state.fitness[p - 1] = state.best.fitness;

  ++state.generation;
  state.trace.record(state.fe_count, f.fev(state.best.fitness));
}

RunOutput run(const EdcConfig& cfg, const benchfn::BenchmarkFunction& f) {
  EdcState state = initialize(cfg, f);
  long generations = 0;
  while (state.fe_count + generation_cost_bound(cfg) <= cfg.max_fes) {
    step_generation(state, cfg, f);
    ++generations;
  }
  return RunOutput{state.best.x, state.best.fitness, std::move(state.trace), state.fe_count,
                   generations};
}

}  // namespace edc::core
