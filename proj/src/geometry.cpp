#include "varbound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"

namespace varbound {
namespace {

constexpr double kSimplexPivotTol = 1e-12;

void require_dim(const FeasibleSet& set, std::size_t n, const char* what) {
  if (n != set.dim()) {
    std::ostringstream os;
    os << what << ": dimension " << n << " does not match set dimension "
       << set.dim();
    throw ContractViolation(os.str());
  }
}

void require_finite(std::span<const double> y, const char* what) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      throw ContractViolation(std::string(what) + ": non-finite coordinate");
    }
  }
}

Point project_simplex(std::span<const double> y) {
  const std::size_t d = y.size();
  double total = 0.0;
  bool nonneg = true;
  for (double v : y) {
    total += v;
    nonneg = nonneg && v >= 0.0;
  }
  if (nonneg && std::fabs(total - 1.0) <= kSimplexPivotTol) {
    return Point(y.begin(), y.end());
  }

  Point u(y.begin(), y.end());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    cumulative += u[j];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (u[j] - candidate > kSimplexPivotTol) theta = candidate;
  }
  Point x(d);
  for (std::size_t i = 0; i < d; ++i) x[i] = std::max(y[i] - theta, 0.0);
  return x;
}

}  // namespace

std::string to_string(SetKind kind) {
  switch (kind) {
    case SetKind::kUnitBall:
      return "unit_ball";
    case SetKind::kBall:
      return "ball";
    case SetKind::kBox:
      return "box";
    case SetKind::kSimplex:
      return "simplex";
  }
  return "unknown";
}

FeasibleSet FeasibleSet::unit_ball(std::size_t dim) {
  if (dim == 0) throw ContractViolation("unit_ball: dimension must be >= 1");
  FeasibleSet s(SetKind::kUnitBall, dim);
  s.radius_ = 1.0;
  return s;
}

FeasibleSet FeasibleSet::ball(std::size_t dim, double radius) {
  if (dim == 0) throw ContractViolation("ball: dimension must be >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ContractViolation("ball: radius must be positive and finite");
  }
  FeasibleSet s(SetKind::kBall, dim);
  s.radius_ = radius;
  return s;
}

FeasibleSet FeasibleSet::box(std::vector<double> lo, std::vector<double> hi) {
  if (lo.empty() || lo.size() != hi.size()) {
    throw ContractViolation("box: lo and hi must be non-empty and equal length");
  }
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]) || lo[i] > hi[i]) {
      throw ContractViolation("box: need finite lo <= hi in every coordinate");
    }
  }
  FeasibleSet s(SetKind::kBox, lo.size());
  s.lo_ = std::move(lo);
  s.hi_ = std::move(hi);
  return s;
}

FeasibleSet FeasibleSet::simplex(std::size_t dim) {
  if (dim == 0) throw ContractViolation("simplex: dimension must be >= 1");
  return FeasibleSet(SetKind::kSimplex, dim);
}

double FeasibleSet::inner_radius() const {
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return radius_;
    case SetKind::kBox: {
      double r = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < dim_; ++i) {
        r = std::min({r, -lo_[i], hi_[i]});
      }
      return std::max(r, 0.0);
    }
    case SetKind::kSimplex:
      return 0.0;
  }
  return 0.0;
}

bool FeasibleSet::contains_origin() const {
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return true;
    case SetKind::kBox:
      for (std::size_t i = 0; i < dim_; ++i) {
        if (lo_[i] > 0.0 || hi_[i] < 0.0) return false;
      }
      return true;
    case SetKind::kSimplex:
      return false;
  }
  return false;
}

double FeasibleSet::max_squared_norm() const {
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return radius_ * radius_;
    case SetKind::kBox: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        s += std::max(lo_[i] * lo_[i], hi_[i] * hi_[i]);
      }
      return s;
    }
    case SetKind::kSimplex:
      return 1.0;
  }
  return 0.0;
}

double FeasibleSet::support(std::span<const double> m) const {
  require_dim(*this, m.size(), "support");
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return radius_ * std::sqrt(kernels::squared_norm(m));
    case SetKind::kBox: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) {
        s += std::max(m[i] * lo_[i], m[i] * hi_[i]);
      }
      return s;
    }
    case SetKind::kSimplex:
      return *std::max_element(m.begin(), m.end());
  }
  return 0.0;
}

bool FeasibleSet::within_unit_ball() const {
  return max_squared_norm() <= 1.0 + 1e-12;
}

bool FeasibleSet::contains(std::span<const double> x, double tol) const {
  if (x.size() != dim_) return false;
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return std::sqrt(kernels::squared_norm(x)) <= radius_ + tol;
    case SetKind::kBox:
      for (std::size_t i = 0; i < dim_; ++i) {
        if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
      }
      return true;
    case SetKind::kSimplex: {
      for (double v : x) {
        if (v < -tol) return false;
      }
      return std::fabs(kernels::sum(x) - 1.0) <= tol;
    }
  }
  return false;
}

Point FeasibleSet::project(std::span<const double> y) const {
  require_dim(*this, y.size(), "project");
  require_finite(y, "project");
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall: {
      const double sq = kernels::squared_norm(y);
      Point x(y.begin(), y.end());
      if (sq > radius_ * radius_) {
        kernels::scale(radius_ / std::sqrt(sq), y, x);
      }
      return x;
    }
    case SetKind::kBox: {
      Point x(dim_);
      for (std::size_t i = 0; i < dim_; ++i) {
        x[i] = std::clamp(y[i], lo_[i], hi_[i]);
      }
      return x;
    }
    case SetKind::kSimplex:
      return project_simplex(y);
  }
  return {};
}

Point FeasibleSet::sample(SplitMix64& rng) const {
  Point x(dim_);
  switch (kind_) {
    case SetKind::kUnitBall:
    case SetKind::kBall: {
      double sq = 0.0;
      do {
        for (auto& v : x) v = rng.normal();
        sq = kernels::squared_norm(x);
      } while (sq == 0.0);
      const double r =
          radius_ * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim_));
      kernels::scale(r / std::sqrt(sq), x, x);
      return x;
    }
    case SetKind::kBox:
      for (std::size_t i = 0; i < dim_; ++i) x[i] = rng.uniform(lo_[i], hi_[i]);
      return x;
    case SetKind::kSimplex: {
      double total = 0.0;
      for (auto& v : x) {
        v = -std::log(rng.uniform_open_left());
        total += v;
      }
      if (total == 0.0) {
        std::fill(x.begin(), x.end(), 1.0 / static_cast<double>(dim_));
        return x;
      }
      kernels::scale(1.0 / total, x, x);
      return x;
    }
  }
  return x;
}

std::string FeasibleSet::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(d=" << dim_;
  if (kind_ == SetKind::kBall) os << ", radius=" << radius_;
  os << ")";
  return os.str();
}

Point project(const FeasibleSet& set, std::span<const double> y) {
  return set.project(y);
}

Point linearized_step(const FeasibleSet& set, std::span<const double> z,
                      std::span<const double> g, double stiffness) {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw ContractViolation("linearized_step: stiffness must be positive");
  }
  require_dim(set, z.size(), "linearized_step");
  require_dim(set, g.size(), "linearized_step");
  Point y(z.begin(), z.end());
  kernels::axpy(-1.0 / stiffness, g, y);
  return set.project(y);
}

Point ftrl_solve(const FeasibleSet& set, std::span<const double> grad_sum,
                 double stiffness) {
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw ContractViolation("ftrl_solve: stiffness must be positive");
  }
  require_dim(set, grad_sum.size(), "ftrl_solve");
  Point y(grad_sum.size());
  kernels::scale(-1.0 / stiffness, grad_sum, y);
  return set.project(y);
}

FeasibleSet shrink(const FeasibleSet& set, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw ContractViolation("shrink: alpha must lie in [0, 1)");
  }
  if (!set.contains_origin()) {
    throw ConfigurationError("shrink: set " + set.describe() +
                             " does not contain the origin");
  }
  if (alpha == 0.0) return set;
  const double factor = 1.0 - alpha;
  switch (set.kind()) {
    case SetKind::kUnitBall:
    case SetKind::kBall:
      return FeasibleSet::ball(set.dim(), set.radius() * factor);
    case SetKind::kBox: {
      std::vector<double> lo(set.dim()), hi(set.dim());
      kernels::scale(factor, set.lo(), lo);
      kernels::scale(factor, set.hi(), hi);
      return FeasibleSet::box(std::move(lo), std::move(hi));
    }
    case SetKind::kSimplex:
      break;
  }
  throw ConfigurationError("shrink: unsupported set");
}

std::string to_string(MirrorKind kind) {
  return kind == MirrorKind::kEuclidean ? "euclidean" : "entropy";
}

double MirrorMap::omega(std::span<const double> x) const {
  if (kind_ == MirrorKind::kEuclidean) return 0.5 * kernels::squared_norm(x);
  double s = 0.0;
  for (double v : x) {
    if (v > 0.0) s += v * std::log(v);
  }
  return s;
}

Point MirrorMap::omega_grad(std::span<const double> x) const {
  Point g(x.begin(), x.end());
  if (kind_ == MirrorKind::kEntropy) {
    for (auto& v : g) v = std::log(v) + 1.0;
  }
  return g;
}

double MirrorMap::bregman(std::span<const double> x,
                          std::span<const double> z) const {
  if (x.size() != z.size()) {
    throw ContractViolation("bregman: dimension mismatch");
  }
  if (kind_ == MirrorKind::kEuclidean) {
    return 0.5 * kernels::squared_distance(x, z);
  }
  // Generalised KL divergence; exact expansion of the definition.
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(z[i] > 0.0)) {
      throw ContractViolation("bregman: entropy map needs z > 0");
    }
    if (x[i] > 0.0) s += x[i] * std::log(x[i] / z[i]);
    s += z[i] - x[i];
  }
  return s;
}

double MirrorMap::norm(std::span<const double> v) const {
  if (kind_ == MirrorKind::kEuclidean) {
    return std::sqrt(kernels::squared_norm(v));
  }
  double s = 0.0;
  for (double e : v) s += std::fabs(e);
  return s;
}

double MirrorMap::dual_norm(std::span<const double> v) const {
  if (kind_ == MirrorKind::kEuclidean) {
    return std::sqrt(kernels::squared_norm(v));
  }
  return kernels::max_abs(v);
}

void MirrorMap::check_compatible(const FeasibleSet& set) const {
  if (kind_ == MirrorKind::kEntropy && set.kind() != SetKind::kSimplex) {
    throw ConfigurationError("entropy mirror map requires the simplex, got " +
                             set.describe());
  }
}

Point MirrorMap::minimizer(const FeasibleSet& set) const {
  check_compatible(set);
  if (kind_ == MirrorKind::kEntropy) {
    return Point(set.dim(), 1.0 / static_cast<double>(set.dim()));
  }
  return set.project(Point(set.dim(), 0.0));
}

double MirrorMap::diameter(const FeasibleSet& set) const {
  check_compatible(set);
  if (kind_ == MirrorKind::kEntropy) {
    return std::sqrt(2.0 * std::log(static_cast<double>(set.dim())));
  }
  const Point z0 = minimizer(set);
  return std::sqrt(set.max_squared_norm() - kernels::squared_norm(z0));
}

Point bregman_prox_step(const FeasibleSet& set, const MirrorMap& map,
                        std::span<const double> z, std::span<const double> g,
                        double stiffness) {
  if (map.kind() == MirrorKind::kEuclidean) {
    return linearized_step(set, z, g, stiffness);
  }
  map.check_compatible(set);
  if (!(stiffness > 0.0) || !std::isfinite(stiffness)) {
    throw ContractViolation("bregman_prox_step: stiffness must be positive");
  }
  require_dim(set, z.size(), "bregman_prox_step");
  require_dim(set, g.size(), "bregman_prox_step");
  const std::size_t d = z.size();
  Point w(d);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d; ++i) {
    if (!(z[i] > 0.0)) {
      throw ContractViolation("bregman_prox_step: entropy map needs z > 0");
    }
    w[i] = std::log(z[i]) - g[i] / stiffness;
    top = std::max(top, w[i]);
  }
  double total = 0.0;
  for (auto& v : w) {
    v = std::exp(v - top);
    total += v;
  }
  kernels::scale(1.0 / total, w, w);
  return w;
}

}  // namespace varbound
