#pragma once

// Eigenspace divide-and-conquer optimizer.
//
// Each generation selects the best floor(tau * p) solutions H, feeds them to
// the solution pool, refreshes the eigenbasis every `pool_generations`
// generations, moves the search mean (weighted mean + mean shift, in the
// original space), maps H and the mean into the eigenspace, splits the
// eigenvariables into random groups of `subproblem_size`, samples p - 1
// offspring per group from a Gaussian model, and maps them back. The best
// solution found so far is carried into the next population.
//
// Disabling the transform gives the original-space decomposition variant;
// disabling both transform and decomposition gives plain full-dimensional
// Gaussian EDA.

#include <cstdint>
#include <vector>

#include "edc/benchfn.hpp"
#include "edc/eigenspace.hpp"
#include "edc/gsmgeda.hpp"
#include "edc/rng.hpp"
#include "edc/types.hpp"

namespace edc::core {

struct EdcConfig {
  int population_size = 1000;
  double selection_ratio = 0.5;
  int pool_generations = 20;
  int subproblem_size = 30;
  double eta_forward = 2.0;
  double eta_backward = 0.5;
  long max_fes = 1'000'000;
  bool transform_enabled = true;
  bool decompose_enabled = true;
  std::uint64_t seed = 1;
  std::vector<long> report_checkpoints;  // FE counts; sorted on use
};

/// floor(selection_ratio * population_size)
int selection_size(const EdcConfig& cfg);

/// Throws std::invalid_argument describing the first violated constraint.
void validate(const EdcConfig& cfg, int dimension);

struct TracePoint {
  long fe_count = 0;
  double best_fev = 0.0;

  bool operator==(const TracePoint&) const = default;
};

/// Best-so-far error keyed by evaluation count. fe_count strictly increases.
struct ConvergenceTrace {
  std::vector<TracePoint> points;

  /// Appends unless fe_count equals the last recorded count.
  void record(long fe_count, double best_fev);
  bool operator==(const ConvergenceTrace&) const = default;
};

struct Incumbent {
  Vector x;
  double fitness = 0.0;
};

struct EdcState {
  long generation = 1;
  Matrix population;  // n x p, original space
  Vector fitness;     // length p
  Incumbent best;
  eigenspace::SolutionPool pool;
  eigenspace::Basis basis;
  gsmgeda::MeanTracker tracker;
  long fe_count = 0;
  Rng rng;
  ConvergenceTrace trace;
  std::vector<long> checkpoints;  // sorted, unique
  std::size_t next_checkpoint = 0;
};

/// Random uniform population (p FEs), its mean as the initial search mean
/// (1 FE), identity basis, empty pool. Throws if max_fes < p + 1.
EdcState initialize(const EdcConfig& cfg, const benchfn::BenchmarkFunction& f);

/// Best floor(tau * p) columns of the population, best first. Ties keep the
/// lower population index first.
Matrix select_top(const EdcState& state, const EdcConfig& cfg);

/// Index order used by select_top.
std::vector<int> ranking(const Vector& fitness, int count);

/// One generation. Costs p or p + 1 evaluations.
void step_generation(EdcState& state, const EdcConfig& cfg, const benchfn::BenchmarkFunction& f);

/// Worst-case evaluations of one generation (p - 1 offspring + 2 mean probes).
inline long generation_cost_bound(const EdcConfig& cfg) { return cfg.population_size + 1; }

struct RunOutput {
  Vector best_solution;
  double best_fitness = 0.0;
  ConvergenceTrace trace;
  long fe_count = 0;
  long generations = 0;
};

/// Generations while fe_count + p + 1 <= max_fes.
RunOutput run(const EdcConfig& cfg, const benchfn::BenchmarkFunction& f);

}  // namespace edc::core
