#pragma once

// Variation measures of a cost sequence. Some depend only on the scenario,
// others on the searching points a run actually visited.
//
// Quantities defined as a max over the feasible set are computed exactly when
// the difference being maximised is affine in x (a support-function
// evaluation). Otherwise the max of a convex function over a convex set has no
// tractable recipe, and the value returned is a lower bound from random
// feasible samples refined by projected gradient ascent; `exact` is false.

#include <cstdint>
#include <span>

#include "varbound/algorithms.hpp"
#include "varbound/costs.hpp"

namespace varbound {

struct Estimate {
  double value = 0.0;
  bool exact = true;
};

struct MaxSearchOptions {
  std::size_t samples = 256;
  std::size_t restarts = 16;
  std::size_t ascent_steps = 200;
  std::uint64_t seed = 0x5eedULL;
  // Off forces the sampled search even where a closed form exists.
  bool closed_form = true;
};

// sum_t ||f_t - mean||^2 over linear costs.
double total_variation(const Scenario& scenario);
double total_variation(std::span<const Point> vectors);

// sum_{t=1}^{T-1} max_x ||grad c_{t+1}(x) - grad c_t(x)||^2.
Estimate sequential_variation(const Scenario& scenario,
                              const MaxSearchOptions& options = {});

// sum_{t=0}^{T-1} ||grad c_{t+1}(z_t) - grad c_t(z_t)||^2 with c_0 = 0, along
// the searching points of the trace.
double evar_sequential(const RunTrace& trace);

// Same with the map's dual norm (l_inf for entropy, l_2 for euclidean).
double evar_general_norm(const RunTrace& trace, const MirrorMap& map);

// sum_{t=0}^{T-1} max_x |c_{t+1}(x) - c_t(x)| with c_0 = 0.
Estimate evar_cost_values(const Scenario& scenario,
                          const MaxSearchOptions& options = {});

// max over the set of |c_b(x) - c_a(x)|; one term of evar_cost_values.
Estimate max_value_difference(const CostFunction& a, const CostFunction& b,
                              const FeasibleSet& set,
                              const MaxSearchOptions& options = {});

// max over the set of ||grad c_b(x) - grad c_a(x)||^2.
Estimate max_gradient_difference(const CostFunction& a, const CostFunction& b,
                                 const FeasibleSet& set,
                                 const MaxSearchOptions& options = {});

struct VarDecomposition {
  double var1 = 0.0;  // (1/T) sum_{t,s} ||grad c_t(x_t) - grad c_t(x_s)||^2
  double var2 = 0.0;  // (1/T) sum_{t,s} ||grad c_t(x_s) - grad c_s(x_s)||^2
  double realized_total_variation = 0.0;  // of the vectors grad c_t(x_t)
};

inline constexpr std::size_t kMaxDecompositionHorizon = 5000;

// O(T^2); throws ResourceError beyond kMaxDecompositionHorizon rounds.
VarDecomposition var_decomposition(const RunTrace& trace);

struct VariationReport {
  std::optional<double> total_var;  // linear scenarios only
  Estimate seq_var;                 // needs T >= 2
  double evar_seq = 0.0;
  std::optional<double> evar_general;  // general prox traces only
  Estimate evar_cost;
  std::optional<VarDecomposition> decomposition;  // T <= 5000
};

VariationReport variation_report(const RunTrace& trace,
                                 const MaxSearchOptions& options = {});

}  // namespace varbound
