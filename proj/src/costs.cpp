#include "varbound/costs.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"

namespace varbound {

PsdMatrix::PsdMatrix(std::size_t dim, std::vector<double> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw ContractViolation("PsdMatrix: need dim*dim entries");
  }
  Eigen::MatrixXd m(dim_, dim_);
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) {
      const double a = entries_[r * dim_ + c];
      const double b = entries_[c * dim_ + r];
      if (!std::isfinite(a) ||
          std::fabs(a - b) > 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)})) {
        throw ContractViolation("PsdMatrix: matrix must be finite and symmetric");
      }
      m(r, c) = a;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m,
                                                        Eigen::EigenvaluesOnly);
  lambda_min_ = solver.eigenvalues().minCoeff();
  lambda_max_ = solver.eigenvalues().maxCoeff();
  if (lambda_min_ < -1e-10 * std::max(1.0, lambda_max_)) {
    throw ContractViolation("PsdMatrix: matrix is not positive semidefinite");
  }
  lambda_min_ = std::max(lambda_min_, 0.0);
  lambda_max_ = std::max(lambda_max_, 0.0);
}

PsdMatrix PsdMatrix::identity(std::size_t dim, double scale) {
  std::vector<double> e(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = scale;
  return PsdMatrix(dim, std::move(e));
}

void PsdMatrix::apply(std::span<const double> x, std::span<double> out) const {
  kernels::matvec(entries_, x, out);
}

std::string to_string(CostFamily family) {
  switch (family) {
    case CostFamily::kZero:
      return "zero";
    case CostFamily::kLinear:
      return "linear";
    case CostFamily::kQuadratic:
      return "quadratic";
    case CostFamily::kSmoothPlusDrift:
      return "smooth_plus_drift";
  }
  return "unknown";
}

CostFunction CostFunction::zero(std::size_t dim) {
  CostFunction c(CostFamily::kZero, dim);
  c.v_.assign(dim, 0.0);
  c.finish();
  return c;
}

CostFunction CostFunction::linear(Point f) {
  if (f.empty()) throw ContractViolation("linear cost: empty vector");
  CostFunction c(CostFamily::kLinear, f.size());
  c.v_ = std::move(f);
  c.finish();
  return c;
}

CostFunction CostFunction::quadratic(std::shared_ptr<const PsdMatrix> q,
                                     Point a) {
  if (!q || q->dim() != a.size()) {
    throw ContractViolation("quadratic cost: Q and a dimensions differ");
  }
  CostFunction c(CostFamily::kQuadratic, a.size());
  c.q_ = std::move(q);
  c.v_ = std::move(a);
  c.finish();
  return c;
}

CostFunction CostFunction::smooth_plus_drift(std::shared_ptr<const PsdMatrix> q,
                                             Point f) {
  if (!q || q->dim() != f.size()) {
    throw ContractViolation("smooth_plus_drift cost: Q and f dimensions differ");
  }
  CostFunction c(CostFamily::kSmoothPlusDrift, f.size());
  c.q_ = std::move(q);
  c.v_ = std::move(f);
  c.finish();
  return c;
}

void CostFunction::finish() {
  for (double v : v_) {
    if (!std::isfinite(v)) throw ContractViolation("cost: non-finite parameter");
  }
  const double vnorm = std::sqrt(kernels::squared_norm(v_));
  canonical_.linear.assign(dim_, 0.0);
  switch (family_) {
    case CostFamily::kZero:
      break;
    case CostFamily::kLinear:
      lipschitz_ = vnorm;
      canonical_.linear = v_;
      break;
    case CostFamily::kQuadratic: {
      smoothness_ = q_->lambda_max();
      lipschitz_ = smoothness_ * (1.0 + vnorm);
      canonical_.hessian = q_;
      Point qa(dim_);
      q_->apply(v_, qa);
      kernels::scale(-1.0, qa, canonical_.linear);
      canonical_.constant = 0.5 * kernels::dot(v_, qa);
      break;
    }
    case CostFamily::kSmoothPlusDrift:
      smoothness_ = q_->lambda_max();
      lipschitz_ = smoothness_ + vnorm;
      canonical_.hessian = q_;
      canonical_.linear = v_;
      break;
  }
}

double CostFunction::value(std::span<const double> x) const {
  if (x.size() != dim_) throw ContractViolation("cost value: dimension mismatch");
  switch (family_) {
    case CostFamily::kZero:
      return 0.0;
    case CostFamily::kLinear:
      return kernels::dot(v_, x);
    case CostFamily::kQuadratic: {
      Point diff(dim_), qd(dim_);
      kernels::sub(x, v_, diff);
      q_->apply(diff, qd);
      return 0.5 * kernels::dot(diff, qd);
    }
    case CostFamily::kSmoothPlusDrift: {
      Point qx(dim_);
      q_->apply(x, qx);
      return 0.5 * kernels::dot(x, qx) + kernels::dot(v_, x);
    }
  }
  return 0.0;
}

void CostFunction::gradient_into(std::span<const double> x,
                                 std::span<double> out) const {
  if (x.size() != dim_ || out.size() != dim_) {
    throw ContractViolation("cost gradient: dimension mismatch");
  }
  switch (family_) {
    case CostFamily::kZero:
      std::fill(out.begin(), out.end(), 0.0);
      return;
    case CostFamily::kLinear:
      std::copy(v_.begin(), v_.end(), out.begin());
      return;
    case CostFamily::kQuadratic: {
      Point diff(dim_);
      kernels::sub(x, v_, diff);
      q_->apply(diff, out);
      return;
    }
    case CostFamily::kSmoothPlusDrift:
      q_->apply(x, out);
      kernels::axpy(1.0, v_, out);
      return;
  }
}

Point CostFunction::gradient(std::span<const double> x) const {
  Point g(dim_);
  gradient_into(x, g);
  return g;
}

Scenario::Scenario(std::string id, std::vector<CostFunction> costs,
                   FeasibleSet set, double smoothness_bound,
                   double lipschitz_bound)
    : id_(std::move(id)),
      costs_(std::move(costs)),
      set_(std::move(set)),
      zero_(CostFunction::zero(set_.dim())) {
  if (costs_.empty()) throw ContractViolation("scenario: need T >= 1 costs");
  if (!set_.within_unit_ball()) {
    throw ConfigurationError("scenario: feasible set " + set_.describe() +
                             " is not contained in the unit ball");
  }
  double max_l = 0.0, max_g = 0.0;
  for (const auto& c : costs_) {
    if (c.dim() != set_.dim()) {
      throw ContractViolation("scenario: cost dimension differs from set");
    }
    max_l = std::max(max_l, c.smoothness());
    max_g = std::max(max_g, c.lipschitz());
  }
  if (smoothness_bound <= 0.0) smoothness_bound = max_l > 0.0 ? max_l : 1.0;
  if (lipschitz_bound <= 0.0) lipschitz_bound = max_g > 0.0 ? max_g : 1.0;
  const double slack = 1e-12;
  if (smoothness_bound < max_l * (1.0 - slack) ||
      lipschitz_bound < max_g * (1.0 - slack)) {
    std::ostringstream os;
    os << "scenario: bounds (L=" << smoothness_bound
       << ", G=" << lipschitz_bound << ") below cost constants (L=" << max_l
       << ", G=" << max_g << ")";
    throw ContractViolation(os.str());
  }
  smoothness_bound_ = smoothness_bound;
  lipschitz_bound_ = lipschitz_bound;
}

const CostFunction& Scenario::cost(std::size_t t) const {
  if (t == 0) return zero_;
  if (t > costs_.size()) throw ContractViolation("scenario: round out of range");
  return costs_[t - 1];
}

bool Scenario::all_linear() const {
  return std::all_of(costs_.begin(), costs_.end(), [](const CostFunction& c) {
    return c.family() == CostFamily::kLinear || c.family() == CostFamily::kZero;
  });
}

void AggregateQuadratic::add(const CostFunction& c) {
  const auto& form = c.canonical();
  if (form.hessian) {
    const auto e = form.hessian->entries();
    kernels::axpy(1.0, e, hessian);
  }
  kernels::axpy(1.0, form.linear, linear);
  constant += form.constant;
}

double AggregateQuadratic::value(std::span<const double> x) const {
  Point hx(dim);
  kernels::matvec(hessian, x, hx);
  return 0.5 * kernels::dot(x, hx) + kernels::dot(linear, x) + constant;
}

void AggregateQuadratic::gradient_into(std::span<const double> x,
                                       std::span<double> out) const {
  kernels::matvec(hessian, x, out);
  kernels::axpy(1.0, linear, out);
}

}  // namespace varbound
