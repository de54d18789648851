#include "edc/cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "edc/harness.hpp"

namespace edc::cli {

namespace {

struct Overrides {
  std::string output;
  std::optional<int> runs;
  std::optional<std::uint64_t> seed;
  std::string algorithm;
  std::optional<long> max_fes;
};

void add_override_flags(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--output", o.output, "Output directory for traces and summary.json");
  cmd.add_option("--runs", o.runs, "Number of independent runs")->check(CLI::PositiveNumber);
  cmd.add_option("--seed", o.seed, "Base seed; run i uses seed + i");
  cmd.add_option("--algorithm", o.algorithm, "edc | odc | gsmgeda")
      ->check(CLI::IsMember({"edc", "odc", "gsmgeda"}));
  cmd.add_option("--max-fes", o.max_fes, "Evaluation budget per run")->check(CLI::PositiveNumber);
}

void apply(const Overrides& o, harness::RunConfig& cfg) {
  if (!o.output.empty()) cfg.output_dir = o.output;
  if (o.runs) cfg.runs = *o.runs;
  if (o.seed) cfg.base_seed = *o.seed;
  if (!o.algorithm.empty()) {
    cfg.algorithm = *harness::parse_algorithm(o.algorithm);
    cfg.edc = harness::configure_for(cfg.edc, cfg.algorithm);
  }
  if (o.max_fes) cfg.edc.max_fes = *o.max_fes;
  harness::validate(cfg);
}

std::string sci(double v) {
  std::ostringstream ss;
  ss << std::scientific << std::setprecision(2) << v;
  return ss.str();
}

int cmd_run(const std::string& config_path, const Overrides& overrides, unsigned jobs,
            std::ostream& out) {
  const std::string text = harness::read_file(config_path);
  harness::RunConfig cfg = harness::parse_run_config(text, config_path);
  apply(overrides, cfg);

  const auto ex = harness::run_experiment(cfg, true, jobs);
  for (const auto& r : ex.runs) {
    out << "seed " << r.seed << ": fev " << sci(harness::report_fev(r.raw_fev)) << " (raw "
        << sci(r.raw_fev) << "), " << r.fe_count << " FEs, " << r.generations
        << " generations\n";
  }
  const auto& s = ex.summary;
  out << s.function << " / " << s.algorithm << " over " << s.runs << " runs: " << sci(s.mean_fev)
      << " ± " << sci(s.std_fev) << " (median " << sci(s.median_fev) << ")\n";
  out << "wrote " << (cfg.output_dir / "summary.json").string() << "\n";
  return kExitOk;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, double alpha,
                std::ostream& out) {
  auto load = [](const std::string& path) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(harness::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
      throw harness::ConfigError(path + ": JSON parse error: " + e.what());
    }
    return harness::summary_from_json(j, path);
  };
  const auto a = load(path_a);
  const auto b = load(path_b);
  const auto cmp = harness::compare(a, b, alpha);

  out << "A: " << a.function << " / " << a.algorithm << "  " << sci(a.mean_fev) << " ± "
      << sci(a.std_fev) << "\n";
  out << "B: " << b.function << " / " << b.algorithm << "  " << sci(b.mean_fev) << " ± "
      << sci(b.std_fev) << "\n";
  out << "rank_sum_p " << cmp.rank_sum.p_value << "  significance "
      << stats::mark(cmp.rank_sum.verdict) << "\n";
  out << "cohens_d " << cmp.effect.d << "  effect " << stats::mark(cmp.effect.verdict) << "\n";
  out << "(marks give B relative to A: + better, - worse, ≈ similar)\n";
  return kExitOk;
}

int cmd_trace(const std::string& path, const std::string& export_path, std::ostream& out) {
  const auto trace = harness::parse_trace(harness::read_file(path), path);
  const std::string csv = harness::serialize_trace(trace);
  if (export_path.empty()) {
    out << csv;
    return kExitOk;
  }
  std::ofstream file(export_path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error("cannot open " + export_path + " for writing");
  file << csv;
  out << "wrote " << trace.points.size() << " points to " << export_path << "\n";
  return kExitOk;
}

int cmd_gen_config(const std::string& family, int dimension, const Overrides& overrides,
                   std::ostream& out) {
  harness::RunConfig cfg = harness::default_run_config();
  if (!family.empty()) {
    const auto f = benchfn::parse_family(family);
    if (!f) throw harness::ConfigError("--family: unknown family '" + family + "'");
    cfg.function = benchfn::make_spec(*f, cfg.function.dimension, true, {}, cfg.function.seed);
  }
  if (dimension > 0) cfg.function.dimension = dimension;
  apply(overrides, cfg);
  out << harness::run_config_to_json(cfg).dump(2) << "\n";
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenspace divide-and-conquer optimizer and benchmark harness", "edc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string config_flag;
  Overrides run_overrides;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("config_file", config_path, "Config file (JSON)");
  run->add_option("--config", config_flag, "Config file (JSON)");
  run->add_option("--jobs", jobs, "Concurrent runs (0 = all cores)");
  add_override_flags(*run, run_overrides);

  std::string summary_a;
  std::string summary_b;
  double alpha = 0.05;
  auto* compare = app.add_subcommand("compare", "Rank-sum test and Cohen's d on two summaries");
  compare->add_option("summary_a", summary_a, "Reference summary.json")->required();
  compare->add_option("summary_b", summary_b, "Competitor summary.json")->required();
  compare->add_option("--alpha", alpha, "Significance level");

  std::string trace_path;
  std::string export_path;
  auto* trace = app.add_subcommand("trace", "Validate and print a convergence trace as CSV");
  trace->add_option("run_file", trace_path, "Trace CSV written by `run`")->required();
  trace->add_option("--export", export_path, "Write the CSV to this path instead of stdout");

  std::string family;
  int dimension = 0;
  Overrides gen_overrides;
  auto* gen = app.add_subcommand("gen-config", "Print a default config with reference parameters");
  gen->add_option("--family", family, "sphere|schwefel12|elliptic|rastrigin|ackley|rosenbrock");
  gen->add_option("--dimension", dimension, "Problem dimension")->check(CLI::PositiveNumber);
  add_override_flags(*gen, gen_overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitFailure;
  }

  try {
    if (*run) {
      if (config_path.empty()) config_path = config_flag;
      if (config_path.empty()) {
        err << "edc run: a config file is required (positional or --config)\n";
        return kExitFailure;
      }
      return cmd_run(config_path, run_overrides, jobs, out);
    }
    if (*compare) return cmd_compare(summary_a, summary_b, alpha, out);
    if (*trace) return cmd_trace(trace_path, export_path, out);
    if (*gen) return cmd_gen_config(family, dimension, gen_overrides, out);
  } catch (const harness::MissingFileError& e) {
    err << "edc: " << e.what() << "\n";
    return kExitMissingFile;
  } catch (const harness::ConfigError& e) {
    err << "edc: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    err << "edc: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace edc::cli
