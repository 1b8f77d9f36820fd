#include "varbound/scenarios.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"

namespace varbound::scenarios {
namespace {

std::string make_id(const char* family, std::size_t d, std::size_t t,
                    std::uint64_t seed) {
  std::ostringstream os;
  os << family << "-d" << d << "-T" << t << "-s" << seed;
  return os.str();
}

void clip_to_unit(Point& f) {
  const double n = std::sqrt(kernels::squared_norm(f));
  if (n > 1.0) kernels::scale(1.0 / n, f, f);
}

}  // namespace

std::shared_ptr<const PsdMatrix> random_psd(std::size_t dim, double top,
                                            double floor, SplitMix64& rng) {
  Eigen::MatrixXd a(dim, dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) a(r, c) = rng.normal();
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const Eigen::MatrixXd u = qr.householderQ();
  Eigen::VectorXd lambda(dim);
  for (std::size_t i = 0; i < dim; ++i) lambda(i) = top * rng.uniform(floor, 1.0);
  lambda(0) = top;
  const Eigen::MatrixXd q = u * lambda.asDiagonal() * u.transpose();
  std::vector<double> e(dim * dim);
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      e[r * dim + c] = 0.5 * (q(r, c) + q(c, r));
    }
  }
  return std::make_shared<const PsdMatrix>(dim, std::move(e));
}

Point random_in_ball(std::size_t dim, double radius, SplitMix64& rng) {
  return FeasibleSet::ball(dim, radius).sample(rng);
}

ScenarioPtr identical(const CostFunction& cost, std::size_t horizon,
                      FeasibleSet set, double smoothness_bound,
                      double lipschitz_bound) {
  std::ostringstream os;
  os << "identical-" << to_string(cost.family()) << "-d" << cost.dim() << "-T"
     << horizon;
  return std::make_shared<const Scenario>(
      os.str(), std::vector<CostFunction>(horizon, cost), std::move(set),
      smoothness_bound, lipschitz_bound);
}

ScenarioPtr identical_quadratic(std::size_t dim, std::size_t horizon,
                                std::uint64_t seed, double center_radius,
                                double curvature) {
  SplitMix64 rng(seed);
  auto q = std::make_shared<const PsdMatrix>(PsdMatrix::identity(dim, curvature));
  Point a = random_in_ball(dim, center_radius, rng);
  const auto cost = CostFunction::quadratic(std::move(q), std::move(a));
  return std::make_shared<const Scenario>(
      make_id("identical_quadratic", dim, horizon, seed),
      std::vector<CostFunction>(horizon, cost), FeasibleSet::unit_ball(dim));
}

ScenarioPtr smooth_plus_drift(std::size_t dim, std::size_t horizon,
                              std::uint64_t seed, double drift) {
  if (drift < 0.0) throw ContractViolation("smooth_plus_drift: drift < 0");
  SplitMix64 rng(seed);
  auto q = random_psd(dim, 1.0, 0.2, rng);
  Point f = random_in_ball(dim, 0.5, rng);
  std::vector<CostFunction> costs;
  costs.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    if (t > 0 && drift > 0.0) {
      const Point u = random_in_ball(dim, 1.0, rng);
      kernels::axpy(drift, u, f);
      clip_to_unit(f);
    }
    costs.push_back(CostFunction::smooth_plus_drift(q, f));
  }
  return std::make_shared<const Scenario>(
      make_id("smooth_plus_drift", dim, horizon, seed), std::move(costs),
      FeasibleSet::unit_ball(dim));
}

ScenarioPtr random_linear(std::size_t dim, std::size_t horizon,
                          std::uint64_t seed, double mean_radius,
                          double spread) {
  SplitMix64 rng(seed);
  const Point mean = random_in_ball(dim, mean_radius, rng);
  std::vector<CostFunction> costs;
  costs.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    Point f = mean;
    const Point u = random_in_ball(dim, 1.0, rng);
    kernels::axpy(spread, u, f);
    clip_to_unit(f);
    costs.push_back(CostFunction::linear(std::move(f)));
  }
  return std::make_shared<const Scenario>(
      make_id("random_linear", dim, horizon, seed), std::move(costs),
      FeasibleSet::unit_ball(dim), 1.0, 1.0);
}

ScenarioPtr switching_halves(Point f, Point g, std::size_t horizon) {
  if (f.size() != g.size()) {
    throw ContractViolation("switching_halves: f and g dimensions differ");
  }
  const std::size_t dim = f.size();
  std::vector<CostFunction> costs;
  costs.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    costs.push_back(CostFunction::linear(t < horizon / 2 ? f : g));
  }
  std::ostringstream os;
  os << "switching_halves-d" << dim << "-T" << horizon;
  return std::make_shared<const Scenario>(os.str(), std::move(costs),
                                          FeasibleSet::unit_ball(dim), 1.0);
}

ScenarioPtr random_quadratics(std::size_t dim, std::size_t horizon,
                              std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<CostFunction> costs;
  costs.reserve(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    auto q = random_psd(dim, rng.uniform(0.5, 1.0), 0.1, rng);
    costs.push_back(
        CostFunction::quadratic(std::move(q), random_in_ball(dim, 0.5, rng)));
  }
  return std::make_shared<const Scenario>(
      make_id("random_quadratics", dim, horizon, seed), std::move(costs),
      FeasibleSet::unit_ball(dim));
}

}  // namespace varbound::scenarios
