#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace varbound {

// A caller broke an operation's precondition (dimension mismatch, step size
// out of range, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// An incompatible combination of components, e.g. an entropy mirror map on a
// box or a bandit run on a set that does not contain the origin.
class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The request would exceed a hard resource limit.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An iterative solver hit its iteration cap. Carries the best iterate found.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_iterate,
                   double residual)
      : std::runtime_error(what),
        best_iterate_(std::move(best_iterate)),
        residual_(residual) {}

  const std::vector<double>& best_iterate() const { return best_iterate_; }
  double residual() const { return residual_; }

 private:
  std::vector<double> best_iterate_;
  double residual_;
};

}  // namespace varbound
