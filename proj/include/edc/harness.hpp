#pragma once

// Experiment runner: repeated seeded runs of one algorithm on one benchmark
// instance, FEV reporting, summaries and pairwise comparisons.
//
// Files written by run_experiment into output_dir:
//   <function>_<algorithm>_seed<k>.csv   header "fe_count,best_fev", one row
//                                        per trace point, fev in shortest
//                                        round-trip decimal form
//   summary.json                         {function, algorithm, runs, mean_fev,
//                                        std_fev, median_fev, per_run_fev[], ...}

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "edc/benchfn.hpp"
#include "edc/edc_core.hpp"
#include "edc/stats.hpp"

namespace edc::harness {

/// Error values below this are reported as exactly zero.
inline constexpr double kZeroThreshold = 1e-8;

enum class Algorithm { EDC, ODC, GSMGEDA };

std::string_view algorithm_name(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Sets the transform / decomposition switches for the algorithm variant.
core::EdcConfig configure_for(core::EdcConfig cfg, Algorithm a);

/// Malformed configuration or input document. Carries a location
/// ("file:line:col" or a dotted field path) in what().
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Missing or unreadable file.
class MissingFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  benchfn::FunctionSpec function = benchfn::make_spec(benchfn::Family::Sphere, 100);
  Algorithm algorithm = Algorithm::EDC;
  core::EdcConfig edc;
  int runs = 25;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "results";
  std::vector<long> checkpoints;  // empty: default_checkpoints(max_fes)

  std::uint64_t seed_of_run(int i) const { return base_seed + static_cast<std::uint64_t>(i); }
};

/// Throws ConfigError on any invalid field.
void validate(const RunConfig& cfg);

/// Parses a JSON config document. `source` names the document in messages.
RunConfig parse_run_config(std::string_view text, std::string_view source = "config");
nlohmann::json run_config_to_json(const RunConfig& cfg);

/// Config with the reference parameters (p=1000, tau=0.5, l=20, s=30,
/// eta_f=2, eta_b=0.5) on the 100-D shifted sphere with a 1e6 budget.
RunConfig default_run_config();

/// `count` log-spaced evaluation counts in [1, max_fes], deduplicated.
std::vector<long> default_checkpoints(long max_fes, int count = 100);

/// Raw FEV with the reporting floor applied.
inline double report_fev(double raw) { return raw < kZeroThreshold ? 0.0 : raw; }

struct RunResult {
  std::uint64_t seed = 0;
  Vector best_solution;
  double best_fitness = 0.0;
  double raw_fev = 0.0;
  core::ConvergenceTrace trace;
  long fe_count = 0;
  long generations = 0;
};

struct ExperimentSummary {
  std::string function;
  std::string algorithm;
  int runs = 0;
  double mean_fev = 0.0;
  double std_fev = 0.0;
  double median_fev = 0.0;
  std::vector<double> per_run_fev;      // floored
  std::vector<double> raw_per_run_fev;  // empty when loaded from older files
};

/// Floors every FEV, then mean / sample std / median.
ExperimentSummary summarize(std::string function, std::string algorithm,
                            const std::vector<double>& raw_fevs);

struct Experiment {
  RunConfig config;
  std::vector<RunResult> runs;
  ExperimentSummary summary;
};

/// One run of the configured algorithm with the given seed on `f`.
RunResult run_single(const RunConfig& cfg, const benchfn::BenchmarkFunction& f,
                     std::uint64_t seed);

/// Runs cfg.runs seeds (base_seed + i) on one shared function instance,
/// `jobs` at a time (0 = hardware concurrency). Writes outputs when
/// `write_outputs` is set; files are written only after every run finished.
Experiment run_experiment(const RunConfig& cfg, bool write_outputs = true, unsigned jobs = 0);

/// Writes trace files and summary.json. Throws std::runtime_error with the
/// offending path on I/O failure.
void write_outputs(const Experiment& experiment);

std::string trace_file_name(std::string_view function, std::string_view algorithm,
                            std::uint64_t seed);

std::string serialize_trace(const core::ConvergenceTrace& trace);
/// Throws ConfigError on malformed content.
core::ConvergenceTrace parse_trace(std::string_view text, std::string_view source = "trace");

nlohmann::json summary_to_json(const ExperimentSummary& s);
ExperimentSummary summary_from_json(const nlohmann::json& j, std::string_view source = "summary");

struct Comparison {
  stats::RankSumResult rank_sum;
  stats::EffectSize effect;
};

/// Rank-sum and Cohen's d of B's per-run FEVs against A's.
Comparison compare(const ExperimentSummary& a, const ExperimentSummary& b, double alpha = 0.05);

/// Reads a whole file. Throws MissingFileError if it does not exist.
std::string read_file(const std::filesystem::path& path);

}  // namespace edc::harness
