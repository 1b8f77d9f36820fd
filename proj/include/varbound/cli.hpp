#pragma once

// Experiment driver behind the `varbound` executable: JSON configs in, CSV
// traces and JSON summaries out.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "varbound/algorithms.hpp"
#include "varbound/harness.hpp"

namespace varbound::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;

const char* library_version();

struct SetSpec {
  std::string kind = "unit_ball";
  double radius = 1.0;
  Point lo, hi;
};

struct ScenarioSpec {
  std::string family;
  std::size_t horizon = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 1;
  std::optional<double> variation;  // drift or spread, family dependent
  double center_radius = 0.5;
  double curvature = 1.0;
  double mean_radius = 0.5;
  Point f, g;  // switching_halves, identical_linear
  std::optional<SetSpec> set;
  double smoothness_bound = 0.0;
  double lipschitz_bound = 0.0;
};

struct BanditSpec {
  bool theorem = true;
  BanditParameters params;
};

struct AlgorithmSpec {
  AlgorithmId id = AlgorithmId::kImprovedFtrl;
  StepSizeRule rule;
  bool horizon_scaled = false;  // eta / sqrt(T)
  MirrorKind map = MirrorKind::kEuclidean;
  std::vector<std::uint64_t> seeds{1};
  BanditSpec bandit;
  std::string label;
};

struct SweepSpec {
  std::vector<std::size_t> horizons;
  std::vector<std::size_t> dims;
  std::vector<double> variations;
  std::vector<std::uint64_t> scenario_seeds;
  std::optional<std::vector<std::uint64_t>> seeds;
};

struct ExperimentConfig {
  nlohmann::json echo;
  ScenarioSpec scenario;
  std::vector<AlgorithmSpec> algorithms;
  std::vector<TheoremId> checks;
  std::string trace_name = "trace.csv";
  std::string summary_name = "summary.json";
  std::optional<SweepSpec> sweep;
};

// Throws ConfigurationError with a diagnostic on any invalid field.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// The scenario a spec describes. Pure function of the spec.
ScenarioPtr build_scenario(const ScenarioSpec& spec);

// Runs one algorithm spec on a scenario: one trace per seed for bandit runs.
std::vector<RunTrace> execute(const ScenarioPtr& scenario,
                              const AlgorithmSpec& spec, int jobs);

// Per-round table with the fixed column order
// t,eta,x,z,cost,cum_cost,cum_regret,evar_partial.
std::string trace_csv(const RunTrace& trace);
RunTrace read_trace_csv(const std::string& text, ScenarioPtr scenario,
                        const AlgorithmSpec& spec);

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  std::optional<std::filesystem::path> trace;  // check only
};

int cmd_run(const Options& options, std::ostream& log);
int cmd_compare(const Options& options, std::ostream& log);
int cmd_sweep(const Options& options, std::ostream& log);
int cmd_check(const Options& options, std::ostream& log);

// Full command line, argv[0] included. Returns the process exit code.
int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace varbound::cli
