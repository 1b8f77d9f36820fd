#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "varbound/algorithms.hpp"
#include "varbound/errors.hpp"
#include "varbound/scenarios.hpp"
#include "varbound/variation.hpp"

using namespace varbound;

namespace {

TEST(TotalVariation, KnownValues) {
  EXPECT_EQ(total_variation(*scenarios::switching_halves({1.0, 0.0}, {1.0, 0.0}, 10)),
            0.0);
  // Half f, half g: every vector sits ||f-g||/2 from the mean.
  auto s = scenarios::switching_halves({1.0, 0.0}, {0.0, 1.0}, 10);
  EXPECT_NEAR(total_variation(*s), 10 * 0.5, 1e-14);
  EXPECT_THROW(total_variation(*scenarios::identical_quadratic(2, 5, 1)),
               ConfigurationError);
}

TEST(SequentialVariation, SwitchingHalvesHasOneJump) {
  const Point f{0.6, -0.2}, g{-0.3, 0.5};
  for (std::size_t horizon : {4u, 40u, 400u}) {
    const Estimate e = sequential_variation(*scenarios::switching_halves(f, g, horizon));
    EXPECT_TRUE(e.exact);
    EXPECT_NEAR(e.value, 0.81 + 0.49, 1e-14);
  }
  EXPECT_THROW(sequential_variation(*scenarios::switching_halves(f, g, 1)),
               ContractViolation);
}

TEST(SequentialVariation, AtMostFourTimesTotalVariation) {
  SplitMix64 rng(61);
  for (int k = 0; k < 50; ++k) {
    auto s = scenarios::random_linear(1 + rng.index(5), 2 + rng.index(100),
                                      rng.next(), 0.5, rng.uniform(0.0, 1.0));
    EXPECT_LE(sequential_variation(*s).value, 4.0 * total_variation(*s) + 1e-8);
  }
}

TEST(SequentialVariation, SampledSearchIsALowerBoundOfTheClosedForm) {
  auto s = scenarios::smooth_plus_drift(3, 20, 5, 0.3);
  const Estimate exact = sequential_variation(*s);
  MaxSearchOptions opt;
  opt.closed_form = false;
  const Estimate sampled = sequential_variation(*s, opt);
  EXPECT_TRUE(exact.exact);
  EXPECT_FALSE(sampled.exact);
  EXPECT_LE(sampled.value, exact.value + 1e-12);
  EXPECT_GE(sampled.value, 0.99 * exact.value);
}

TEST(MaxValueDifference, AffineCaseUsesSupportFunction) {
  const auto set = FeasibleSet::unit_ball(2);
  const auto a = CostFunction::linear(Point{0.3, 0.0});
  const auto b = CostFunction::linear(Point{0.0, 0.4});
  const Estimate e = max_value_difference(a, b, set);
  EXPECT_TRUE(e.exact);
  EXPECT_NEAR(e.value, 0.5, 1e-15);
  MaxSearchOptions opt;
  opt.closed_form = false;
  EXPECT_NEAR(max_value_difference(a, b, set, opt).value, 0.5, 1e-9);
}

TEST(MaxValueDifference, QuadraticAgainstZeroMatchesGrid) {
  auto q = std::make_shared<const PsdMatrix>(PsdMatrix(2, {1.0, 0.3, 0.3, 0.5}));
  const auto c = CostFunction::quadratic(q, Point{0.2, -0.1});
  const auto set = FeasibleSet::unit_ball(2);
  const Estimate e = max_value_difference(CostFunction::zero(2), c, set);
  EXPECT_FALSE(e.exact);
  const auto grid = oracle::grid_min_2d(
      set, [&](const Point& u) { return -std::fabs(c.value(u)); }, 1e-3);
  EXPECT_LE(e.value, -grid.value + 1e-12 + 3e-3);
  EXPECT_GE(e.value, -grid.value - 1e-9);
}

TEST(Evar, IdenticalCostsOnlyChargeTheFirstRound) {
  auto s = scenarios::identical_quadratic(4, 50, 3);
  const RunTrace t = run_improved_ftrl(s, StepSizeRule::oracle());
  const double first = std::pow(oracle::norm2(s->cost(1).gradient(Point(4, 0.0))), 2);
  EXPECT_NEAR(evar_sequential(t), first, 1e-15);
  EXPECT_NEAR(*a_priori_evar(*s, Point(4, 0.0), MirrorMap::euclidean()), first, 1e-15);
}

TEST(Evar, AprioriMatchesRealisedOnPointIndependentScenarios) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto s = scenarios::smooth_plus_drift(5, 200, seed, 0.1);
    const RunTrace t = run_prox(s, StepSizeRule::oracle());
    const double prior = *a_priori_evar(*s, Point(5, 0.0), MirrorMap::euclidean());
    EXPECT_NEAR(evar_sequential(t), prior, 1e-10 * std::max(1.0, prior));
  }
  EXPECT_FALSE(a_priori_evar(*scenarios::random_quadratics(3, 10, 1), Point(3, 0.0),
                             MirrorMap::euclidean()));
}

TEST(Evar, CostValueVariation) {
  // Linear costs: every term is a support-function evaluation.
  auto s = scenarios::switching_halves({0.6, 0.0}, {0.0, 0.8}, 6);
  const Estimate e = evar_cost_values(*s);
  EXPECT_TRUE(e.exact);
  EXPECT_NEAR(e.value, 0.6 + 1.0, 1e-15);
}

TEST(Decomposition, SumsMatchDefinitionsAndLimit) {
  auto s = scenarios::random_quadratics(2, 30, 8);
  const RunTrace t = run_improved_ftrl(s, StepSizeRule::fixed(0.5));
  const VarDecomposition v = var_decomposition(t);
  double var1 = 0.0, var2 = 0.0;
  for (std::size_t a = 1; a <= 30; ++a) {
    for (std::size_t b = 1; b <= 30; ++b) {
      const Point ga = s->cost(a).gradient(t.rounds[a - 1].x);
      const Point gab = s->cost(a).gradient(t.rounds[b - 1].x);
      const Point gb = s->cost(b).gradient(t.rounds[b - 1].x);
      var1 += std::pow(oracle::dist2(ga, gab), 2);
      var2 += std::pow(oracle::dist2(gab, gb), 2);
    }
  }
  EXPECT_NEAR(v.var1, var1 / 30.0, 1e-12);
  EXPECT_NEAR(v.var2, var2 / 30.0, 1e-12);

  auto big = scenarios::identical_quadratic(2, kMaxDecompositionHorizon + 1, 1);
  EXPECT_THROW(var_decomposition(run_improved_ftrl(big, StepSizeRule::fixed(1.0))),
               ResourceError);
}

TEST(Report, FlagsExactness) {
  auto s = scenarios::random_quadratics(2, 20, 4);
  const VariationReport r =
      variation_report(run_prox(s, StepSizeRule::fixed(0.5)));
  EXPECT_FALSE(r.total_var.has_value());
  EXPECT_FALSE(r.seq_var.exact);
  EXPECT_FALSE(r.evar_cost.exact);
  EXPECT_TRUE(r.decomposition.has_value());
}

}  // namespace
