#pragma once

// Feasible sets, Euclidean projections and the Bregman machinery behind every
// argmin subproblem the learners solve. All subproblems are closed-form
// projections of an affine image of the input; nothing here iterates.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "varbound/random.hpp"

namespace varbound {

using Point = std::vector<double>;

inline constexpr double kFeasibilityTol = 1e-9;

enum class SetKind { kUnitBall, kBall, kBox, kSimplex };

std::string to_string(SetKind kind);

class FeasibleSet {
 public:
  static FeasibleSet unit_ball(std::size_t dim);
  // Euclidean ball of the given radius centred at the origin.
  static FeasibleSet ball(std::size_t dim, double radius);
  static FeasibleSet box(std::vector<double> lo, std::vector<double> hi);
  // Probability simplex {x >= 0, sum x = 1}.
  static FeasibleSet simplex(std::size_t dim);

  SetKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  double radius() const { return radius_; }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  // Largest r with r*B inside the set, 0 when the origin is not interior.
  double inner_radius() const;
  bool contains_origin() const;
  // Whether every point of the set has Euclidean norm <= 1.
  bool within_unit_ball() const;
  // max over the set of ||x||_2^2.
  double max_squared_norm() const;
  // Support function: max over the set of m'x.
  double support(std::span<const double> m) const;

  bool contains(std::span<const double> x, double tol = kFeasibilityTol) const;

  // argmin_{x in set} ||x - y||_2.
  Point project(std::span<const double> y) const;

  // A random point of the set. Uniform for balls and boxes, flat Dirichlet on
  // the simplex.
  Point sample(SplitMix64& rng) const;

  std::string describe() const;

 private:
  FeasibleSet(SetKind kind, std::size_t dim) : kind_(kind), dim_(dim) {}

  SetKind kind_;
  std::size_t dim_;
  double radius_ = 0.0;
  std::vector<double> lo_, hi_;
};

Point project(const FeasibleSet& set, std::span<const double> y);

// argmin_x g'x + (stiffness/2)||x - z||^2 over the set.
Point linearized_step(const FeasibleSet& set, std::span<const double> z,
                      std::span<const double> g, double stiffness);

// argmin_x grad_sum'x + (stiffness/2)||x||^2 over the set.
Point ftrl_solve(const FeasibleSet& set, std::span<const double> grad_sum,
                 double stiffness);

// The scaled set (1 - alpha) * set. Requires the set to contain the origin.
FeasibleSet shrink(const FeasibleSet& set, double alpha);

enum class MirrorKind { kEuclidean, kEntropy };

std::string to_string(MirrorKind kind);

// A distance-generating function omega together with the norm it is strongly
// convex against:
//   euclidean: omega = 0.5||x||^2, 1-strongly convex for ||.||_2
//   entropy:   omega = sum x log x, 1-strongly convex for ||.||_1 on the
//              simplex (Pinsker), dual norm ||.||_inf
class MirrorMap {
 public:
  static MirrorMap euclidean() { return MirrorMap(MirrorKind::kEuclidean); }
  static MirrorMap entropy() { return MirrorMap(MirrorKind::kEntropy); }

  MirrorKind kind() const { return kind_; }
  double alpha() const { return 1.0; }

  double omega(std::span<const double> x) const;
  Point omega_grad(std::span<const double> x) const;
  // D(x, z) = omega(x) - omega(z) - (x - z)'omega'(z).
  double bregman(std::span<const double> x, std::span<const double> z) const;

  double norm(std::span<const double> v) const;
  double dual_norm(std::span<const double> v) const;

  // Throws ConfigurationError when the map cannot be used on the set.
  void check_compatible(const FeasibleSet& set) const;

  // argmin over the set of omega; the initial searching point.
  Point minimizer(const FeasibleSet& set) const;

  // sqrt(2 (max omega - min omega)) over the set.
  double diameter(const FeasibleSet& set) const;

 private:
  explicit MirrorMap(MirrorKind kind) : kind_(kind) {}
  MirrorKind kind_;
};

// argmin_x g'x + stiffness * D(x, z) over the set. With the euclidean map this
// is exactly linearized_step; with the entropy map on the simplex it is the
// normalised multiplicative update x_i ~ z_i exp(-g_i / stiffness).
Point bregman_prox_step(const FeasibleSet& set, const MirrorMap& map,
                        std::span<const double> z, std::span<const double> g,
                        double stiffness);

}  // namespace varbound
