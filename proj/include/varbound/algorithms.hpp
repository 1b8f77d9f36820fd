#pragma once

// The online learners. Each run consumes a Scenario round by round, never
// looking at c_t before committing to x_t, and returns an immutable RunTrace.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "varbound/costs.hpp"
#include "varbound/geometry.hpp"

namespace varbound {

enum class AlgorithmId {
  kFtrlLinear,     // FTRL on linear costs, regulariser ||x||^2 / (2 eta)
  kFtrlGradients,  // the same learner fed f_t = grad c_t(x_t)
  kImprovedFtrl,   // two-sequence FTRL
  kProx,           // Euclidean prox method
  kGeneralProx,    // Bregman prox method
  kBandit,         // multi-point bandit prox method
};

std::string to_string(AlgorithmId id);
AlgorithmId algorithm_from_string(const std::string& name);

enum class StepMode { kFixed, kOracle, kDoubling };

std::string to_string(StepMode mode);

// How a learner picks eta.
//   fixed:    the given eta, used as is
//   oracle:   the theorem's eta computed from a variation known before the run
//             (only legal when that variation does not depend on the trace)
//   doubling: restart epochs with a growing variation guess
struct StepSizeRule {
  StepMode mode = StepMode::kFixed;
  double eta = 0.0;

  static StepSizeRule fixed(double eta) { return {StepMode::kFixed, eta}; }
  static StepSizeRule oracle() { return {StepMode::kOracle, 0.0}; }
  static StepSizeRule doubling() { return {StepMode::kDoubling, 0.0}; }
};

struct RoundRecord {
  std::size_t t = 0;
  Point x;       // decision played
  Point z;       // searching point after the update
  Point z_prev;  // searching point the prediction was formed from
  double cost = 0.0;      // incurred loss; the smoothed loss for bandit runs
  double raw_cost = 0.0;  // c_t(x_t)
  double eta = 0.0;
  // Bandit bookkeeping: sampled coordinate, then every query point (flattened,
  // dim entries each) with its observed value, in the order they were made.
  std::optional<std::size_t> probe;
  std::vector<double> query_points;
  std::vector<double> query_values;
};

struct RunTrace {
  ScenarioPtr scenario;
  AlgorithmId algorithm = AlgorithmId::kImprovedFtrl;
  StepMode step_mode = StepMode::kFixed;
  MirrorKind map = MirrorKind::kEuclidean;
  bool adaptive = false;
  std::optional<std::uint64_t> seed;
  Point z0;
  std::vector<RoundRecord> rounds;
  // Rounds (1-based) at which a doubling epoch begins; {1} for plain runs.
  std::vector<std::size_t> epoch_starts{1};
  std::vector<double> epoch_guesses;
  // Bandit parameters.
  double delta = 0.0;
  double shrink_alpha = 0.0;
  double stiffness_constant = 0.0;

  std::size_t horizon() const { return rounds.size(); }
  const std::string& scenario_id() const { return scenario->id(); }
  std::string algorithm_name() const;
};

// Exact a-priori variation along any trace started at z0, available when every
// consecutive gradient difference is independent of the point:
//   ||grad c_1(z0)||_*^2 + sum_t ||grad c_{t+1} - grad c_t||_*^2.
// nullopt otherwise.
std::optional<double> a_priori_evar(const Scenario& scenario,
                                    std::span<const double> z0,
                                    const MirrorMap& map);

// Step sizes prescribed by the regret theorems.
double ftrl_linear_eta(double total_variation);       // min(2/sqrt(V), 1/6)
double improved_ftrl_eta(double smoothness, double evar);  // min(1, L/sqrt(E))
double prox_eta(double smoothness, double evar);  // 0.5 min(1, L/sqrt(E))
double general_prox_eta(double smoothness, double diameter, double alpha,
                        double evar);  // 0.5 min(sqrt(a), LR/sqrt(E))

RunTrace run_ftrl_linear(ScenarioPtr scenario, StepSizeRule rule);
RunTrace run_ftrl_on_gradients(ScenarioPtr scenario, double eta);
RunTrace run_improved_ftrl(ScenarioPtr scenario, StepSizeRule rule);
RunTrace run_prox(ScenarioPtr scenario, StepSizeRule rule);
RunTrace run_general_prox(ScenarioPtr scenario, const MirrorMap& map,
                          StepSizeRule rule);

struct BanditParameters {
  double delta = 0.0;
  double eta = 0.0;
  double alpha = 0.0;
  // Multiplies 1/eta in both prox steps; defaults to the scenario's G bound.
  std::optional<double> stiffness_constant;
};

// delta, eta, alpha from the bandit regret theorem for the given constants.
BanditParameters bandit_theorem_parameters(double lipschitz, double smoothness,
                                           double inner_radius, std::size_t dim,
                                           std::size_t horizon,
                                           double evar_cost);

RunTrace run_bandit(ScenarioPtr scenario, const BanditParameters& params,
                    std::uint64_t seed);

// Doubling-trick wrapper around improved FTRL or the prox method. Epoch k
// guesses a variation of L^2 4^k, runs the base learner with the theorem's
// eta for that guess from z = 0, and restarts once the epoch's running
// variation exceeds the guess.
RunTrace adaptive_eta(AlgorithmId base, ScenarioPtr scenario);

}  // namespace varbound
