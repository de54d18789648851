#include "edc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace edc::harness {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Field readers for config documents. Paths are dotted ("edc.max_fes").
class Reader {
 public:
  Reader(const json& obj, std::string prefix, std::string_view source)
      : obj_(obj), prefix_(std::move(prefix)), source_(source) {
    if (!obj_.is_object()) fail("", "expected an object");
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail(key, "unknown field");
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }
  const json& raw(const char* key) const { return obj_.at(key); }

  long integer(const char* key) const {
    const json& v = obj_.at(key);
    if (v.is_number_integer()) return v.get<long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e18) {
        return static_cast<long>(d);
      }
    }
    fail(key, "expected integer");
  }

  std::uint64_t unsigned_integer(const char* key) const {
    const json& v = obj_.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long>() >= 0) return static_cast<std::uint64_t>(v.get<long>());
    fail(key, "expected non-negative integer");
  }

  double real(const char* key) const {
    const json& v = obj_.at(key);
    if (!v.is_number()) fail(key, "expected number");
    return v.get<double>();
  }

  bool boolean(const char* key) const {
    const json& v = obj_.at(key);
    if (!v.is_boolean()) fail(key, "expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key) const {
    const json& v = obj_.at(key);
    if (!v.is_string()) fail(key, "expected string");
    return v.get<std::string>();
  }

  [[noreturn]] void fail(std::string_view key, std::string_view msg) const {
    std::string path = prefix_;
    if (!key.empty()) path += (path.empty() ? "" : ".") + std::string(key);
    throw ConfigError(std::string(source_) + ": field '" + (path.empty() ? "<root>" : path) +
                      "': " + std::string(msg));
  }

 private:
  const json& obj_;
  std::string prefix_;
  std::string_view source_;
};

std::vector<long> read_checkpoints(const Reader& r, const char* key) {
  const json& arr = r.raw(key);
  if (!arr.is_array()) r.fail(key, "expected array of evaluation counts");
  std::vector<long> out;
  for (const auto& v : arr) {
    if (!v.is_number_integer() || v.get<long>() < 1) {
      r.fail(key, "expected positive integer evaluation counts");
    }
    out.push_back(v.get<long>());
  }
  return out;
}

core::EdcConfig read_edc(const json& j, std::string_view source, Algorithm algorithm) {
  Reader r(j, "edc", source);
  r.allow_only({"population_size", "selection_ratio", "pool_generations", "subproblem_size",
                "eta_forward", "eta_backward", "max_fes", "transform_enabled",
                "decompose_enabled", "report_checkpoints"});
  core::EdcConfig cfg = configure_for(core::EdcConfig{}, algorithm);
  auto to_int = [&](const char* key) {
    const long v = r.integer(key);
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
      r.fail(key, "out of range");
    }
    return static_cast<int>(v);
  };
  if (r.has("population_size")) cfg.population_size = to_int("population_size");
  if (r.has("selection_ratio")) cfg.selection_ratio = r.real("selection_ratio");
  if (r.has("pool_generations")) cfg.pool_generations = to_int("pool_generations");
  if (r.has("subproblem_size")) cfg.subproblem_size = to_int("subproblem_size");
  if (r.has("eta_forward")) cfg.eta_forward = r.real("eta_forward");
  if (r.has("eta_backward")) cfg.eta_backward = r.real("eta_backward");
  if (r.has("max_fes")) cfg.max_fes = r.integer("max_fes");
  if (r.has("transform_enabled") && r.boolean("transform_enabled") != cfg.transform_enabled) {
    r.fail("transform_enabled", "conflicts with algorithm '" +
                                    std::string(algorithm_name(algorithm)) + "'");
  }
  if (r.has("decompose_enabled") && r.boolean("decompose_enabled") != cfg.decompose_enabled) {
    r.fail("decompose_enabled", "conflicts with algorithm '" +
                                    std::string(algorithm_name(algorithm)) + "'");
  }
  if (r.has("report_checkpoints")) cfg.report_checkpoints = read_checkpoints(r, "report_checkpoints");
  return cfg;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::EDC: return "edc";
    case Algorithm::ODC: return "odc";
    case Algorithm::GSMGEDA: return "gsmgeda";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::EDC, Algorithm::ODC, Algorithm::GSMGEDA}) {
    if (algorithm_name(a) == name) return a;
  }
  return std::nullopt;
}

core::EdcConfig configure_for(core::EdcConfig cfg, Algorithm a) {
  cfg.transform_enabled = a == Algorithm::EDC;
  cfg.decompose_enabled = a != Algorithm::GSMGEDA;
  return cfg;
}

void validate(const RunConfig& cfg) {
  try {
    benchfn::validate(cfg.function);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("function: ") + e.what());
  }
  try {
    core::validate(configure_for(cfg.edc, cfg.algorithm), cfg.function.dimension);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.runs < 1) throw ConfigError("runs: must be >= 1");
  for (long c : cfg.checkpoints) {
    if (c < 1) throw ConfigError("checkpoints: evaluation counts must be positive");
  }
}

RunConfig parse_run_config(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t offset = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    const std::string_view head = text.substr(0, offset);
    const auto line = 1 + std::count(head.begin(), head.end(), '\n');
    const auto nl = head.rfind('\n');
    const auto col = nl == std::string_view::npos ? offset + 1 : offset - nl;
    throw ConfigError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": JSON parse error: " + e.what());
  }

  Reader r(doc, "", source);
  r.allow_only({"function", "algorithm", "edc", "runs", "base_seed", "output_dir", "checkpoints"});

  RunConfig cfg;
  if (r.has("algorithm")) {
    const auto a = parse_algorithm(r.string("algorithm"));
    if (!a) r.fail("algorithm", "expected edc|odc|gsmgeda");
    cfg.algorithm = *a;
  }
  if (!r.has("function")) r.fail("function", "missing field");
  try {
    cfg.function = benchfn::spec_from_json(r.raw("function"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  cfg.edc = r.has("edc") ? read_edc(r.raw("edc"), source, cfg.algorithm)
                         : configure_for(core::EdcConfig{}, cfg.algorithm);
  if (r.has("runs")) {
    const long runs = r.integer("runs");
    if (runs < 1 || runs > 100000) r.fail("runs", "must lie in [1, 100000]");
    cfg.runs = static_cast<int>(runs);
  }
  if (r.has("base_seed")) cfg.base_seed = r.unsigned_integer("base_seed");
  if (r.has("output_dir")) cfg.output_dir = r.string("output_dir");
  if (r.has("checkpoints")) cfg.checkpoints = read_checkpoints(r, "checkpoints");

  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
  const core::EdcConfig& e = cfg.edc;
  return json{{"function", benchfn::spec_to_json(cfg.function)},
              {"algorithm", algorithm_name(cfg.algorithm)},
              {"edc",
               {{"population_size", e.population_size},
                {"selection_ratio", e.selection_ratio},
                {"pool_generations", e.pool_generations},
                {"subproblem_size", e.subproblem_size},
                {"eta_forward", e.eta_forward},
                {"eta_backward", e.eta_backward},
                {"max_fes", e.max_fes}}},
              {"runs", cfg.runs},
              {"base_seed", cfg.base_seed},
              {"output_dir", cfg.output_dir.string()},
              {"checkpoints", cfg.checkpoints}};
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.function = benchfn::make_spec(benchfn::Family::Sphere, 100, true, {}, 1);
  cfg.algorithm = Algorithm::EDC;
  cfg.edc = configure_for(core::EdcConfig{}, Algorithm::EDC);
  return cfg;
}

std::vector<long> default_checkpoints(long max_fes, int count) {
  std::vector<long> out;
  if (max_fes < 1 || count < 1) return out;
  const double top = std::log(static_cast<double>(max_fes));
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
    const long c = std::clamp(std::lround(std::exp(frac * top)), 1L, max_fes);
    if (out.empty() || out.back() != c) out.push_back(c);
  }
  return out;
}

ExperimentSummary summarize(std::string function, std::string algorithm,
                            const std::vector<double>& raw_fevs) {
  ExperimentSummary s;
  s.function = std::move(function);
  s.algorithm = std::move(algorithm);
  s.runs = static_cast<int>(raw_fevs.size());
  s.raw_per_run_fev = raw_fevs;
  s.per_run_fev.reserve(raw_fevs.size());
  for (double v : raw_fevs) s.per_run_fev.push_back(report_fev(v));
  s.mean_fev = stats::mean(s.per_run_fev);
  s.std_fev = stats::sample_std(s.per_run_fev);
  s.median_fev = stats::median(s.per_run_fev);
  return s;
}

RunResult run_single(const RunConfig& cfg, const benchfn::BenchmarkFunction& f,
                     std::uint64_t seed) {
  core::EdcConfig edc = configure_for(cfg.edc, cfg.algorithm);
  edc.seed = seed;
  edc.report_checkpoints =
      cfg.checkpoints.empty() ? default_checkpoints(edc.max_fes) : cfg.checkpoints;
  auto out = core::run(edc, f);
  RunResult r;
  r.seed = seed;
  r.best_solution = std::move(out.best_solution);
  r.best_fitness = out.best_fitness;
  r.raw_fev = f.fev(out.best_fitness);
  r.trace = std::move(out.trace);
  r.fe_count = out.fe_count;
  r.generations = out.generations;
  return r;
}

Experiment run_experiment(const RunConfig& cfg, bool write, unsigned jobs) {
  validate(cfg);
  const benchfn::BenchmarkFunction f(cfg.function);

  Experiment ex;
  ex.config = cfg;
  ex.runs.resize(static_cast<std::size_t>(cfg.runs));

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, static_cast<unsigned>(cfg.runs));

  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.runs));
  auto worker = [&] {
    for (int i = next++; i < cfg.runs; i = next++) {
      try {
        ex.runs[static_cast<std::size_t>(i)] = run_single(cfg, f, cfg.seed_of_run(i));
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < jobs; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<double> fevs;
  for (const auto& r : ex.runs) fevs.push_back(r.raw_fev);
  ex.summary = summarize(std::string(benchfn::family_name(cfg.function.family)),
                         std::string(algorithm_name(cfg.algorithm)), fevs);
  if (write) write_outputs(ex);
  return ex;
}

std::string trace_file_name(std::string_view function, std::string_view algorithm,
                            std::uint64_t seed) {
  return std::string(function) + "_" + std::string(algorithm) + "_seed" + std::to_string(seed) +
         ".csv";
}

void write_outputs(const Experiment& ex) {
  const auto& dir = ex.config.output_dir;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  for (const auto& r : ex.runs) {
    write_text(dir / trace_file_name(ex.summary.function, ex.summary.algorithm, r.seed),
               serialize_trace(r.trace));
  }
  json j = summary_to_json(ex.summary);
  j["dimension"] = ex.config.function.dimension;
  j["function_spec"] = benchfn::spec_to_json(ex.config.function);
  j["max_fes"] = ex.config.edc.max_fes;
  std::vector<std::uint64_t> seeds;
  for (const auto& r : ex.runs) seeds.push_back(r.seed);
  j["seeds"] = seeds;
  write_text(dir / "summary.json", j.dump(2) + "\n");
}

std::string serialize_trace(const core::ConvergenceTrace& trace) {
  std::string out = "fe_count,best_fev\n";
  for (const auto& p : trace.points) {
    out += std::to_string(p.fe_count);
    out += ',';
    out += format_double(p.best_fev);
    out += '\n';
  }
  return out;
}

core::ConvergenceTrace parse_trace(std::string_view text, std::string_view source) {
  core::ConvergenceTrace trace;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + msg);
  };
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != "fe_count,best_fev") fail("expected header 'fe_count,best_fev'");
      continue;
    }
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) fail("expected two comma-separated fields");
    core::TracePoint p;
    const auto fe = line.substr(0, comma);
    const auto fev = line.substr(comma + 1);
    auto r1 = std::from_chars(fe.data(), fe.data() + fe.size(), p.fe_count);
    if (r1.ec != std::errc() || r1.ptr != fe.data() + fe.size()) fail("bad fe_count");
    auto r2 = std::from_chars(fev.data(), fev.data() + fev.size(), p.best_fev);
    if (r2.ec != std::errc() || r2.ptr != fev.data() + fev.size()) fail("bad best_fev");
    if (!trace.points.empty()) {
      if (p.fe_count <= trace.points.back().fe_count) fail("fe_count must strictly increase");
      if (p.best_fev > trace.points.back().best_fev) fail("best_fev must not increase");
    }
    trace.points.push_back(p);
  }
  if (line_no == 0) fail("empty trace file");
  return trace;
}

json summary_to_json(const ExperimentSummary& s) {
  json j{{"function", s.function},     {"algorithm", s.algorithm},   {"runs", s.runs},
         {"mean_fev", s.mean_fev},     {"std_fev", s.std_fev},       {"median_fev", s.median_fev},
         {"per_run_fev", s.per_run_fev}};
  if (!s.raw_per_run_fev.empty()) j["raw_per_run_fev"] = s.raw_per_run_fev;
  return j;
}

ExperimentSummary summary_from_json(const json& j, std::string_view source) {
  Reader r(j, "", source);
  for (const char* key : {"function", "algorithm", "runs", "per_run_fev"}) {
    if (!r.has(key)) r.fail(key, "missing field");
  }
  ExperimentSummary s;
  s.function = r.string("function");
  s.algorithm = r.string("algorithm");
  s.runs = static_cast<int>(r.integer("runs"));
  auto numbers = [&](const char* key) {
    std::vector<double> out;
    const json& arr = r.raw(key);
    if (!arr.is_array()) r.fail(key, "expected array of numbers");
    for (const auto& v : arr) {
      if (!v.is_number()) r.fail(key, "expected array of numbers");
      out.push_back(v.get<double>());
    }
    return out;
  };
  s.per_run_fev = numbers("per_run_fev");
  if (r.has("raw_per_run_fev")) s.raw_per_run_fev = numbers("raw_per_run_fev");
  if (static_cast<int>(s.per_run_fev.size()) != s.runs) {
    r.fail("per_run_fev", "length differs from 'runs'");
  }
  s.mean_fev = r.has("mean_fev") ? r.real("mean_fev") : stats::mean(s.per_run_fev);
  s.std_fev = r.has("std_fev") ? r.real("std_fev") : stats::sample_std(s.per_run_fev);
  s.median_fev = r.has("median_fev") ? r.real("median_fev") : stats::median(s.per_run_fev);
  return s;
}

Comparison compare(const ExperimentSummary& a, const ExperimentSummary& b, double alpha) {
  return Comparison{stats::rank_sum_test(a.per_run_fev, b.per_run_fev, alpha),
                    stats::cohens_d(a.per_run_fev, b.per_run_fev)};
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw MissingFileError("no such file: " + path.string());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFileError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace edc::harness
