#pragma once

// Seeded scenario generators. Every generator is a pure function of its
// arguments; the same seed always yields the same scenario.

#include <cstdint>
#include <memory>

#include "varbound/costs.hpp"

namespace varbound::scenarios {

// Random symmetric matrix with eigenvalues in [floor * top, top].
std::shared_ptr<const PsdMatrix> random_psd(std::size_t dim, double top,
                                            double floor, SplitMix64& rng);

// Uniform point in the ball of the given radius.
Point random_in_ball(std::size_t dim, double radius, SplitMix64& rng);

// T copies of one cost.
ScenarioPtr identical(const CostFunction& cost, std::size_t horizon,
                      FeasibleSet set, double smoothness_bound = 0.0,
                      double lipschitz_bound = 0.0);

// c_t(x) = 0.5 * curvature * ||x - a||^2 with a uniform in (center_radius)B.
ScenarioPtr identical_quadratic(std::size_t dim, std::size_t horizon,
                                std::uint64_t seed, double center_radius = 0.5,
                                double curvature = 1.0);

// c_t(x) = 0.5 x'Qx + f_t'x with one shared Q (eigenvalues in [0.2, 1]) and a
// drifting linear term f_{t+1} = clip(f_t + drift * u_t), u_t uniform in B.
// Gradient differences are point-independent, so EVAR is known up front.
ScenarioPtr smooth_plus_drift(std::size_t dim, std::size_t horizon,
                              std::uint64_t seed, double drift);

// f_t = clip(mean + spread * u_t) with mean uniform in (mean_radius)B and u_t
// uniform in B; all ||f_t|| <= 1.
ScenarioPtr random_linear(std::size_t dim, std::size_t horizon,
                          std::uint64_t seed, double mean_radius,
                          double spread);

// f for the first half of the rounds, g for the rest.
ScenarioPtr switching_halves(Point f, Point g, std::size_t horizon);

// Independent quadratics 0.5 (x - a_t)'Q_t(x - a_t); gradient differences
// depend on the point.
ScenarioPtr random_quadratics(std::size_t dim, std::size_t horizon,
                              std::uint64_t seed);

}  // namespace varbound::scenarios
