#pragma once

// Regret measurement against the best fixed decision in hindsight, and
// numeric checks of the regret-bound inequalities on recorded runs.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "varbound/algorithms.hpp"
#include "varbound/variation.hpp"

namespace varbound {

struct OfflineOptions {
  std::size_t max_iterations = 100000;
  double tolerance = 1e-9;  // on the projected-gradient-mapping norm
  std::size_t certificate_samples = 200;
  std::uint64_t seed = 0xc0ffeeULL;
};

struct OfflineSolution {
  Point point;
  double value = 0.0;
  // max over sampled feasible u of grad F(x*)'(x* - u), clipped at 0.
  double certificate = 0.0;
  double mapping_norm = 0.0;
  std::size_t iterations = 0;
};

// argmin over the set of F = sum_t c_t by accelerated projected gradient
// with step 1/(T * L_bound). Throws ConvergenceError at the iteration cap.
OfflineSolution offline_best(const Scenario& scenario,
                             const OfflineOptions& options = {});

// Same solver for an explicit aggregate, optionally warm-started.
OfflineSolution minimize_aggregate(const AggregateQuadratic& objective,
                                   const FeasibleSet& set, double step,
                                   const Point* warm_start,
                                   const OfflineOptions& options = {});

struct RegretReport {
  double cumulative_cost = 0.0;
  double best_fixed_cost = 0.0;
  double regret = 0.0;
  Point best_point;
  double certificate = 0.0;
};

// Bandit traces are charged their smoothed loss and compared against the
// full feasible set.
RegretReport regret(const RunTrace& trace, const OfflineOptions& options = {});

// Regret of every prefix t = 1..T against the best point for that prefix.
std::vector<double> prefix_regret(const RunTrace& trace,
                                  const OfflineOptions& options = {});

struct RegretStatistics {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t count = 0;
};

RegretStatistics summarize(std::span<const double> regrets);

enum class TheoremId { kEq2, kThm1, kThm2, kThm3, kThm4, kLemma1, kLemma2Step };

std::string to_string(TheoremId id);
TheoremId theorem_from_string(const std::string& name);

struct BoundCheck {
  TheoremId theorem = TheoremId::kThm1;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
  double margin = 0.0;  // rhs - lhs
  std::size_t worst_round = 0;
  std::string note;

  double relative_margin() const;
};

// satisfied iff lhs <= rhs + 1e-8 * max(1, |rhs|).
BoundCheck make_check(TheoremId id, double lhs, double rhs);

// Keeps whichever of the two has the smaller relative margin.
void keep_worst(BoundCheck& worst, const BoundCheck& candidate);

// The improved-FTRL inequality at every prefix of a fixed-eta run.
BoundCheck check_lemma1(const RunTrace& trace);

// One pair of prox updates from the same anchor z:
//   x  = argmin_u gamma u'xi   + D(u, z)
//   z+ = argmin_u gamma u'zeta + D(u, z)
struct ProxStep {
  Point z, x, z_next, xi, zeta;
  double gamma = 0.0;
};

// gamma zeta'(x - u) <= D(u,z) - D(u,z+) + (gamma^2/alpha)||xi - zeta||_*^2
//                        - (alpha/2)(||x - z||^2 + ||x - z+||^2)
// for `u_samples` random u in the set plus u = x and u = z+.
BoundCheck check_prox_lemma(const ProxStep& step, const FeasibleSet& set,
                            const MirrorMap& map, std::size_t u_samples,
                            SplitMix64& rng);

// check_prox_lemma on every round of a prox or general-prox trace.
BoundCheck check_prox_trace(const RunTrace& trace, std::size_t u_samples = 100,
                            std::uint64_t seed = 0xabcdefULL);

// Regret vs the theorem's right-hand side computed from the realised
// variation. Refuses (ContractViolation) traces not run with the prescribed
// step size. kThm4 needs check_bandit_theorem instead.
BoundCheck check_theorem_bound(const RunTrace& trace, TheoremId theorem,
                               const OfflineOptions& options = {});

// Expected smoothed regret of >= 100 seeded bandit runs vs the bound, with
// lhs = mean - 2 standard errors. evar_cost must be the value the runs'
// parameters were derived from.
BoundCheck check_bandit_theorem(std::span<const RunTrace> traces,
                                double evar_cost,
                                const OfflineOptions& options = {});

// Bias of the exact expectation of the one-coordinate estimator at x:
// || E_i[g^(x, e_i)] - grad c(x) || <= d L delta / 2.
BoundCheck check_bandit_estimator(const CostFunction& cost,
                                  const FeasibleSet& set,
                                  std::span<const double> x, double delta);

struct EstimatorIdentity {
  // max_k |E_i[g^_t(x, e_i)]_k - g_t(x)_k|
  double mean_vs_full = 0.0;
  // max_k |E_i[g~_t(x)]_k - E_i[g^_t(x, e_i)]_k|
  double tilde_vs_hat = 0.0;
};

// Both expectations taken exactly by averaging over all d coordinates.
EstimatorIdentity bandit_estimator_identity(const CostFunction& previous,
                                            const CostFunction& current,
                                            std::span<const double> x,
                                            std::span<const double> z_prev,
                                            double delta);

}  // namespace varbound
