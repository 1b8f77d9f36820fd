#pragma once

// Smooth convex cost families with exact gradients and their smoothness
// metadata, and the Scenario that bundles a cost sequence with its domain.

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "varbound/geometry.hpp"

namespace varbound {

// Dense symmetric positive semidefinite matrix, row-major, with its largest
// eigenvalue cached at construction.
class PsdMatrix {
 public:
  PsdMatrix(std::size_t dim, std::vector<double> entries);
  static PsdMatrix identity(std::size_t dim, double scale = 1.0);

  std::size_t dim() const { return dim_; }
  std::span<const double> entries() const { return entries_; }
  double operator()(std::size_t r, std::size_t c) const {
    return entries_[r * dim_ + c];
  }
  double lambda_max() const { return lambda_max_; }
  double lambda_min() const { return lambda_min_; }

  void apply(std::span<const double> x, std::span<double> out) const;

 private:
  std::size_t dim_;
  std::vector<double> entries_;
  double lambda_max_ = 0.0;
  double lambda_min_ = 0.0;
};

enum class CostFamily { kZero, kLinear, kQuadratic, kSmoothPlusDrift };

std::string to_string(CostFamily family);

// Every family is a quadratic polynomial; this is its canonical form
//   c(x) = 0.5 x'Hx + h'x + k
// with H absent (null) for the zero and linear families.
struct QuadraticForm {
  std::shared_ptr<const PsdMatrix> hessian;
  Point linear;
  double constant = 0.0;
};

class CostFunction {
 public:
  // c(x) = 0. Stands in for c_0 in every learner.
  static CostFunction zero(std::size_t dim);
  // c(x) = f'x
  static CostFunction linear(Point f);
  // c(x) = 0.5 (x - a)'Q(x - a)
  static CostFunction quadratic(std::shared_ptr<const PsdMatrix> q, Point a);
  // c(x) = 0.5 x'Qx + f'x
  static CostFunction smooth_plus_drift(std::shared_ptr<const PsdMatrix> q,
                                        Point f);

  CostFamily family() const { return family_; }
  std::size_t dim() const { return dim_; }

  double value(std::span<const double> x) const;
  Point gradient(std::span<const double> x) const;
  void gradient_into(std::span<const double> x, std::span<double> out) const;

  // Gradient-Lipschitz constant (largest eigenvalue of Q, 0 for linear).
  double smoothness() const { return smoothness_; }
  // Upper bound on the value-Lipschitz constant over the unit ball.
  double lipschitz() const { return lipschitz_; }

  const std::shared_ptr<const PsdMatrix>& hessian() const { return q_; }
  // f for linear and smooth-plus-drift costs, a for quadratics.
  const Point& vector() const { return v_; }

  const QuadraticForm& canonical() const { return canonical_; }

 private:
  CostFunction(CostFamily family, std::size_t dim)
      : family_(family), dim_(dim) {}
  void finish();

  CostFamily family_;
  std::size_t dim_;
  std::shared_ptr<const PsdMatrix> q_;
  Point v_;
  double smoothness_ = 0.0;
  double lipschitz_ = 0.0;
  QuadraticForm canonical_;
};

// A finite cost sequence c_1..c_T over a feasible set, with the uniform
// smoothness and value-Lipschitz bounds handed to the learners. Immutable.
class Scenario {
 public:
  // Bounds default to the largest per-cost constants; a zero default is
  // replaced by 1 so that step sizes stay finite.
  Scenario(std::string id, std::vector<CostFunction> costs, FeasibleSet set,
           double smoothness_bound = 0.0, double lipschitz_bound = 0.0);

  const std::string& id() const { return id_; }
  std::size_t horizon() const { return costs_.size(); }
  std::size_t dim() const { return set_.dim(); }
  const FeasibleSet& set() const { return set_; }
  double smoothness_bound() const { return smoothness_bound_; }
  double lipschitz_bound() const { return lipschitz_bound_; }

  // 1-based; cost(0) is the zero function.
  const CostFunction& cost(std::size_t t) const;
  const std::vector<CostFunction>& costs() const { return costs_; }

  bool all_linear() const;

 private:
  std::string id_;
  std::vector<CostFunction> costs_;
  FeasibleSet set_;
  CostFunction zero_;
  double smoothness_bound_;
  double lipschitz_bound_;
};

using ScenarioPtr = std::shared_ptr<const Scenario>;

// Aggregate sum of canonical forms, F(x) = sum_t c_t(x), as dense arrays.
struct AggregateQuadratic {
  std::size_t dim = 0;
  std::vector<double> hessian;  // row-major, zeros when every cost is linear
  Point linear;
  double constant = 0.0;

  explicit AggregateQuadratic(std::size_t d)
      : dim(d), hessian(d * d, 0.0), linear(d, 0.0) {}

  void add(const CostFunction& c);
  double value(std::span<const double> x) const;
  void gradient_into(std::span<const double> x, std::span<double> out) const;
};

}  // namespace varbound
