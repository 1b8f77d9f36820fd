#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "varbound/algorithms.hpp"
#include "varbound/errors.hpp"
#include "varbound/scenarios.hpp"

using namespace varbound;

namespace {

ScenarioPtr linear_on_box() {
  SplitMix64 rng(5);
  std::vector<CostFunction> costs;
  for (int t = 0; t < 20; ++t) {
    costs.push_back(CostFunction::linear(scenarios::random_in_ball(2, 1.0, rng)));
  }
  return std::make_shared<const Scenario>(
      "box", std::move(costs), FeasibleSet::box({0.1, 0.1}, {0.5, 0.5}));
}

TEST(Ftrl, FirstPlayIsProjectionOfOrigin) {
  auto s = linear_on_box();
  const RunTrace a = run_ftrl_linear(s, StepSizeRule::fixed(0.1));
  EXPECT_EQ(a.rounds[0].x, (Point{0.1, 0.1}));
  const RunTrace b = run_ftrl_on_gradients(s, 0.1);
  EXPECT_EQ(b.rounds[0].x, (Point{0.1, 0.1}));
  // On linear costs the two learners coincide.
  for (std::size_t t = 0; t < a.horizon(); ++t) EXPECT_EQ(a.rounds[t].x, b.rounds[t].x);
}

TEST(Ftrl, PlaysTheRegularisedLeader) {
  auto s = scenarios::random_linear(3, 30, 2, 0.5, 0.5);
  const double eta = 0.3;
  const RunTrace tr = run_ftrl_linear(s, StepSizeRule::fixed(eta));
  Point sum(3, 0.0);
  for (std::size_t t = 1; t <= 30; ++t) {
    const Point expect = ftrl_solve(s->set(), sum, 1.0 / eta);
    EXPECT_EQ(tr.rounds[t - 1].x, expect);
    for (int i = 0; i < 3; ++i) sum[i] += s->cost(t).vector()[i];
  }
}

TEST(Ftrl, LinearRunnerRejectsBadInput) {
  EXPECT_THROW(run_ftrl_linear(scenarios::identical_quadratic(2, 5, 1),
                               StepSizeRule::fixed(0.1)),
               ConfigurationError);
  EXPECT_THROW(run_ftrl_linear(scenarios::random_linear(2, 5, 1, 0.5, 0.5),
                               StepSizeRule::doubling()),
               ContractViolation);
  EXPECT_THROW(run_ftrl_linear(scenarios::random_linear(2, 5, 1, 0.5, 0.5),
                               StepSizeRule::fixed(0.0)),
               ContractViolation);
  EXPECT_THROW(run_ftrl_linear(nullptr, StepSizeRule::fixed(0.1)), ContractViolation);
}

TEST(StepSizes, PrescribedFormulas) {
  EXPECT_DOUBLE_EQ(ftrl_linear_eta(0.0), 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(ftrl_linear_eta(400.0), 0.1);
  EXPECT_DOUBLE_EQ(improved_ftrl_eta(2.0, 16.0), 0.5);
  EXPECT_DOUBLE_EQ(improved_ftrl_eta(2.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(prox_eta(2.0, 16.0), 0.25);
  EXPECT_DOUBLE_EQ(general_prox_eta(1.0, 2.0, 1.0, 16.0), 0.25);
  EXPECT_DOUBLE_EQ(general_prox_eta(1.0, 2.0, 1.0, 64.0), 0.125);
  EXPECT_DOUBLE_EQ(general_prox_eta(1.0, 2.0, 1.0, 1.0), 0.5);
}

TEST(ImprovedFtrl, StartsAtOriginAndRejectsLargeEta) {
  auto s = scenarios::random_quadratics(3, 10, 2);
  const RunTrace t = run_improved_ftrl(s, StepSizeRule::fixed(0.5));
  EXPECT_EQ(t.rounds[0].x, Point(3, 0.0));
  EXPECT_EQ(t.rounds[0].z_prev, Point(3, 0.0));
  EXPECT_THROW(run_improved_ftrl(s, StepSizeRule::fixed(1.5)), ContractViolation);
  EXPECT_NO_THROW(run_prox(s, StepSizeRule::fixed(1.5)));
}

TEST(ImprovedFtrl, OracleNeedsPointIndependentDifferences) {
  EXPECT_THROW(run_improved_ftrl(scenarios::random_quadratics(3, 10, 2),
                                 StepSizeRule::oracle()),
               ContractViolation);
  auto s = scenarios::smooth_plus_drift(3, 50, 2, 0.1);
  const RunTrace t = run_improved_ftrl(s, StepSizeRule::oracle());
  const double e = *a_priori_evar(*s, Point(3, 0.0), MirrorMap::euclidean());
  EXPECT_DOUBLE_EQ(t.rounds[0].eta, improved_ftrl_eta(s->smoothness_bound(), e));
}

TEST(Runs, PlaysStayFeasibleAndAreDeterministic) {
  auto s = scenarios::random_quadratics(4, 100, 3);
  for (auto run : {+[](ScenarioPtr p) { return run_improved_ftrl(p, StepSizeRule::fixed(0.7)); },
                   +[](ScenarioPtr p) { return run_prox(p, StepSizeRule::fixed(0.4)); },
                   +[](ScenarioPtr p) { return adaptive_eta(AlgorithmId::kProx, p); }}) {
    const RunTrace a = run(s);
    const RunTrace b = run(s);
    ASSERT_EQ(a.horizon(), 100u);
    for (std::size_t t = 0; t < 100; ++t) {
      EXPECT_TRUE(s->set().contains(a.rounds[t].x));
      EXPECT_TRUE(s->set().contains(a.rounds[t].z));
      EXPECT_EQ(a.rounds[t].x, b.rounds[t].x);
      EXPECT_EQ(a.rounds[t].cost, s->cost(t + 1).value(a.rounds[t].x));
    }
  }
}

TEST(GeneralProx, EuclideanMapMatchesProx) {
  auto s = scenarios::smooth_plus_drift(3, 60, 4, 0.1);
  const RunTrace a = run_prox(s, StepSizeRule::fixed(0.3));
  const RunTrace b = run_general_prox(s, MirrorMap::euclidean(), StepSizeRule::fixed(0.3));
  for (std::size_t t = 0; t < 60; ++t) {
    EXPECT_EQ(a.rounds[t].x, b.rounds[t].x);
    EXPECT_EQ(a.rounds[t].z, b.rounds[t].z);
  }
}

TEST(GeneralProx, EntropyNeedsTheSimplex) {
  auto s = scenarios::smooth_plus_drift(3, 10, 4, 0.1);
  EXPECT_THROW(run_general_prox(s, MirrorMap::entropy(), StepSizeRule::fixed(0.3)),
               ConfigurationError);
  auto q = std::make_shared<const PsdMatrix>(PsdMatrix::identity(3));
  auto on_simplex = scenarios::identical(CostFunction::quadratic(q, {0.6, 0.3, 0.1}), 40,
                                         FeasibleSet::simplex(3));
  const RunTrace t =
      run_general_prox(on_simplex, MirrorMap::entropy(), StepSizeRule::oracle());
  EXPECT_EQ(t.z0, Point(3, 1.0 / 3.0));
  for (const auto& r : t.rounds) EXPECT_TRUE(on_simplex->set().contains(r.x));
  EXPECT_LT(oracle::dist2(t.rounds.back().x, {0.6, 0.3, 0.1}), 0.05);
}

TEST(Bandit, ParameterChecks) {
  auto s = scenarios::identical_quadratic(2, 10, 1);
  BanditParameters p{0.01, 0.001, 0.02, std::nullopt};
  EXPECT_THROW(run_bandit(s, p, 1), ContractViolation);
  p.alpha = 0.01;
  EXPECT_NO_THROW(run_bandit(s, p, 1));
  auto simplex = scenarios::identical(CostFunction::linear({0.1, 0.2}), 10,
                                      FeasibleSet::simplex(2));
  EXPECT_THROW(run_bandit(simplex, p, 1), ConfigurationError);
  EXPECT_THROW(bandit_theorem_parameters(1.0, 1.0, 0.0, 2, 100, 1.0),
               ConfigurationError);
}

TEST(Bandit, TheoremParametersSatisfyAlphaIsDeltaOverR) {
  const auto p = bandit_theorem_parameters(1.0, 1.0, 0.5, 3, 1000, 4.0);
  EXPECT_DOUBLE_EQ(p.alpha, p.delta / 0.5);
  EXPECT_DOUBLE_EQ(p.eta, p.delta / 12.0 * 0.5);
  EXPECT_DOUBLE_EQ(p.delta, std::sqrt(4.0 * 3.0 * 2.0 / ((3.0 + 3.0) * 1000.0)));
}

TEST(Bandit, MakesDPlusThreeFeasibleQueriesPerRound) {
  auto s = scenarios::identical_quadratic(3, 50, 2);
  const auto p = bandit_theorem_parameters(s->lipschitz_bound(), s->smoothness_bound(),
                                           1.0, 3, 50, 1.0);
  const RunTrace a = run_bandit(s, p, 9);
  const RunTrace b = run_bandit(s, p, 9);
  const RunTrace c = run_bandit(s, p, 10);
  bool differs = false;
  for (std::size_t t = 0; t < 50; ++t) {
    const auto& r = a.rounds[t];
    ASSERT_EQ(r.query_values.size(), 6u);
    ASSERT_EQ(r.query_points.size(), 18u);
    for (std::size_t q = 0; q < 6; ++q) {
      const Point pt(r.query_points.begin() + q * 3, r.query_points.begin() + q * 3 + 3);
      EXPECT_TRUE(s->set().contains(pt));
      EXPECT_EQ(r.query_values[q], s->cost(t + 1).value(pt));
    }
    EXPECT_EQ(r.x, b.rounds[t].x);
    EXPECT_EQ(r.probe, b.rounds[t].probe);
    differs = differs || r.probe != c.rounds[t].probe;
  }
  EXPECT_TRUE(differs);
}

TEST(Doubling, EpochsGrowByFour) {
  auto s = scenarios::random_quadratics(3, 400, 6);
  const RunTrace t = adaptive_eta(AlgorithmId::kImprovedFtrl, s);
  ASSERT_EQ(t.epoch_starts.size(), t.epoch_guesses.size());
  EXPECT_EQ(t.epoch_starts.front(), 1u);
  const double l = s->smoothness_bound();
  for (std::size_t k = 0; k < t.epoch_guesses.size(); ++k) {
    EXPECT_DOUBLE_EQ(t.epoch_guesses[k], l * l * std::pow(4.0, static_cast<double>(k)));
    EXPECT_DOUBLE_EQ(t.rounds[t.epoch_starts[k] - 1].eta,
                     improved_ftrl_eta(l, t.epoch_guesses[k]));
    if (k > 0) {
      EXPECT_GT(t.epoch_starts[k], t.epoch_starts[k - 1]);
    }
  }
  EXPECT_GT(t.epoch_starts.size(), 1u);
  EXPECT_TRUE(t.adaptive);
  EXPECT_THROW(adaptive_eta(AlgorithmId::kGeneralProx, s), ContractViolation);
}

TEST(Names, RoundTrip) {
  for (auto id : {AlgorithmId::kFtrlLinear, AlgorithmId::kFtrlGradients,
                  AlgorithmId::kImprovedFtrl, AlgorithmId::kProx,
                  AlgorithmId::kGeneralProx, AlgorithmId::kBandit}) {
    EXPECT_EQ(algorithm_from_string(to_string(id)), id);
  }
  EXPECT_THROW(algorithm_from_string("sgd"), ConfigurationError);
}

}  // namespace
