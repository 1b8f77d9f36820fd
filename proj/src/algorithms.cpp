#include "varbound/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"
#include "varbound/variation.hpp"

namespace varbound {
namespace {

void require_scenario(const ScenarioPtr& s) {
  if (!s) throw ContractViolation("run: null scenario");
}

bool same_hessian(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.hessian == b.hessian) return true;
  auto all_zero = [](const PsdMatrix& m) {
    const auto e = m.entries();
    return std::all_of(e.begin(), e.end(), [](double v) { return v == 0.0; });
  };
  if (!a.hessian) return all_zero(*b.hessian);
  if (!b.hessian) return all_zero(*a.hessian);
  const auto ea = a.hessian->entries();
  const auto eb = b.hessian->entries();
  return std::equal(ea.begin(), ea.end(), eb.begin(), eb.end());
}

// One round of a two-sequence learner. predict() is called before the cost is
// revealed; observe() receives it and advances the searching point.
class Learner {
 public:
  virtual ~Learner() = default;
  virtual Point predict() = 0;
  virtual void observe(const CostFunction& cost, std::span<const double> x) = 0;
  virtual const Point& searching_point() const = 0;
  // ||grad c_t(z_{t-1}) - grad c_{t-1}(z_{t-1})||^2 for the round just observed.
  double last_variation_term() const { return last_term_; }

 protected:
  double last_term_ = 0.0;
};

class ImprovedFtrlLearner final : public Learner {
 public:
  ImprovedFtrlLearner(const FeasibleSet& set, double stiffness)
      : set_(set),
        stiffness_(stiffness),
        z_(set.dim(), 0.0),
        grad_prev_(set.dim(), 0.0),
        grad_sum_(set.dim(), 0.0) {}

  Point predict() override {
    return linearized_step(set_, z_, grad_prev_, stiffness_);
  }

  void observe(const CostFunction& cost, std::span<const double>) override {
    const Point g = cost.gradient(z_);
    last_term_ = kernels::squared_distance(g, grad_prev_);
    kernels::axpy(1.0, g, grad_sum_);
    z_ = ftrl_solve(set_, grad_sum_, stiffness_);
    cost.gradient_into(z_, grad_prev_);
  }

  const Point& searching_point() const override { return z_; }

 private:
  const FeasibleSet& set_;
  double stiffness_;
  Point z_, grad_prev_, grad_sum_;
};

class ProxLearner final : public Learner {
 public:
  ProxLearner(const FeasibleSet& set, const MirrorMap& map, Point z0,
              double stiffness)
      : set_(set),
        map_(map),
        stiffness_(stiffness),
        z_(std::move(z0)),
        grad_prev_(set.dim(), 0.0) {}

  Point predict() override {
    return bregman_prox_step(set_, map_, z_, grad_prev_, stiffness_);
  }

  void observe(const CostFunction& cost, std::span<const double> x) override {
    const Point g_at_z = cost.gradient(z_);
    const Point diff = [&] {
      Point d(g_at_z.size());
      kernels::sub(g_at_z, grad_prev_, d);
      return d;
    }();
    const double dn = map_.dual_norm(diff);
    last_term_ = dn * dn;
    const Point g_at_x = cost.gradient(x);
    z_ = bregman_prox_step(set_, map_, z_, g_at_x, stiffness_);
    cost.gradient_into(z_, grad_prev_);
  }

  const Point& searching_point() const override { return z_; }

 private:
  const FeasibleSet& set_;
  MirrorMap map_;
  double stiffness_;
  Point z_, grad_prev_;
};

RoundRecord play_round(Learner& learner, const Scenario& scenario,
                       std::size_t t, double eta) {
  RoundRecord r;
  r.t = t;
  r.eta = eta;
  r.z_prev = learner.searching_point();
  r.x = learner.predict();
  const CostFunction& cost = scenario.cost(t);
  r.raw_cost = cost.value(r.x);
  r.cost = r.raw_cost;
  learner.observe(cost, r.x);
  r.z = learner.searching_point();
  return r;
}

double oracle_evar(const Scenario& scenario, std::span<const double> z0,
                   const MirrorMap& map) {
  const auto e = a_priori_evar(scenario, z0, map);
  if (!e) {
    throw ContractViolation(
        "oracle step size needs point-independent gradient differences; use a "
        "fixed or doubling rule for scenario " +
        scenario.id());
  }
  return *e;
}

void require_eta(double eta, double hi, const char* who) {
  if (!(eta > 0.0) || eta > hi || !std::isfinite(eta)) {
    std::ostringstream os;
    os << who << ": eta=" << eta << " outside (0, " << hi << "]";
    throw ContractViolation(os.str());
  }
}

RunTrace run_two_sequence(AlgorithmId id, ScenarioPtr scenario,
                          const MirrorMap& map, StepSizeRule rule) {
  require_scenario(scenario);
  const Scenario& sc = *scenario;
  const FeasibleSet& set = sc.set();
  map.check_compatible(set);
  const double l = sc.smoothness_bound();
  const Point z0 = id == AlgorithmId::kGeneralProx ? map.minimizer(set)
                                                   : Point(sc.dim(), 0.0);

  double eta = rule.eta;
  if (rule.mode == StepMode::kOracle) {
    const double e = oracle_evar(sc, z0, map);
    switch (id) {
      case AlgorithmId::kImprovedFtrl:
        eta = improved_ftrl_eta(l, e);
        break;
      case AlgorithmId::kProx:
        eta = prox_eta(l, e);
        break;
      default:
        eta = general_prox_eta(l, map.diameter(set), map.alpha(), e);
        break;
    }
  }
  const double hi = id == AlgorithmId::kImprovedFtrl
                        ? 1.0
                        : std::numeric_limits<double>::max();
  require_eta(eta, hi, to_string(id).c_str());

  std::unique_ptr<Learner> learner;
  if (id == AlgorithmId::kImprovedFtrl) {
    learner = std::make_unique<ImprovedFtrlLearner>(set, l / eta);
  } else {
    learner = std::make_unique<ProxLearner>(set, map, z0, l / eta);
  }

  RunTrace trace;
  trace.scenario = scenario;
  trace.algorithm = id;
  trace.step_mode = rule.mode;
  trace.map = map.kind();
  trace.z0 = z0;
  trace.rounds.reserve(sc.horizon());
  for (std::size_t t = 1; t <= sc.horizon(); ++t) {
    trace.rounds.push_back(play_round(*learner, sc, t, eta));
  }
  return trace;
}

// FTRL with regulariser ||x||^2/(2 eta); f_t is either the cost vector or the
// gradient at the played point.
RunTrace run_plain_ftrl(AlgorithmId id, ScenarioPtr scenario, double eta,
                        StepMode mode) {
  const Scenario& sc = *scenario;
  const FeasibleSet& set = sc.set();
  const std::size_t d = sc.dim();
  RunTrace trace;
  trace.scenario = scenario;
  trace.algorithm = id;
  trace.step_mode = mode;
  trace.z0 = Point(d, 0.0);
  trace.rounds.reserve(sc.horizon());

  Point sum(d, 0.0);
  Point x = ftrl_solve(set, sum, 1.0 / eta);
  Point f(d);
  for (std::size_t t = 1; t <= sc.horizon(); ++t) {
    RoundRecord r;
    r.t = t;
    r.eta = eta;
    r.z_prev = x;
    r.x = x;
    const CostFunction& cost = sc.cost(t);
    r.raw_cost = cost.value(x);
    r.cost = r.raw_cost;
    cost.gradient_into(x, f);
    kernels::axpy(1.0, f, sum);
    x = ftrl_solve(set, sum, 1.0 / eta);
    r.z = x;
    trace.rounds.push_back(std::move(r));
  }
  return trace;
}

}  // namespace

std::string to_string(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::kFtrlLinear:
      return "ftrl_linear";
    case AlgorithmId::kFtrlGradients:
      return "ftrl_gradients";
    case AlgorithmId::kImprovedFtrl:
      return "improved_ftrl";
    case AlgorithmId::kProx:
      return "prox";
    case AlgorithmId::kGeneralProx:
      return "general_prox";
    case AlgorithmId::kBandit:
      return "bandit";
  }
  return "unknown";
}

AlgorithmId algorithm_from_string(const std::string& name) {
  for (auto id : {AlgorithmId::kFtrlLinear, AlgorithmId::kFtrlGradients,
                  AlgorithmId::kImprovedFtrl, AlgorithmId::kProx,
                  AlgorithmId::kGeneralProx, AlgorithmId::kBandit}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigurationError("unknown algorithm '" + name + "'");
}

std::string to_string(StepMode mode) {
  switch (mode) {
    case StepMode::kFixed:
      return "fixed";
    case StepMode::kOracle:
      return "oracle";
    case StepMode::kDoubling:
      return "doubling";
  }
  return "unknown";
}

std::string RunTrace::algorithm_name() const {
  std::string name = to_string(algorithm);
  if (adaptive) name = "adaptive_" + name;
  if (algorithm == AlgorithmId::kGeneralProx) name += "_" + to_string(map);
  return name;
}

std::optional<double> a_priori_evar(const Scenario& scenario,
                                    std::span<const double> z0,
                                    const MirrorMap& map) {
  const double first = map.dual_norm(scenario.cost(1).gradient(z0));
  double total = first * first;
  Point diff(scenario.dim());
  for (std::size_t t = 1; t < scenario.horizon(); ++t) {
    const auto& a = scenario.cost(t).canonical();
    const auto& b = scenario.cost(t + 1).canonical();
    if (!same_hessian(a, b)) return std::nullopt;
    kernels::sub(b.linear, a.linear, diff);
    const double n = map.dual_norm(diff);
    total += n * n;
  }
  return total;
}

double ftrl_linear_eta(double total_variation) {
  if (total_variation <= 0.0) return 1.0 / 6.0;
  return std::min(2.0 / std::sqrt(total_variation), 1.0 / 6.0);
}

double improved_ftrl_eta(double smoothness, double evar) {
  if (evar <= 0.0) return 1.0;
  return std::min(1.0, smoothness / std::sqrt(evar));
}

double prox_eta(double smoothness, double evar) {
  return 0.5 * improved_ftrl_eta(smoothness, evar);
}

double general_prox_eta(double smoothness, double diameter, double alpha,
                        double evar) {
  const double cap = std::sqrt(alpha);
  if (evar <= 0.0) return 0.5 * cap;
  return 0.5 * std::min(cap, smoothness * diameter / std::sqrt(evar));
}

RunTrace run_ftrl_linear(ScenarioPtr scenario, StepSizeRule rule) {
  require_scenario(scenario);
  for (const auto& c : scenario->costs()) {
    if (c.family() != CostFamily::kLinear && c.family() != CostFamily::kZero) {
      throw ConfigurationError("run_ftrl_linear: scenario has non-linear costs");
    }
    if (kernels::squared_norm(c.vector()) > 1.0 + 1e-12) {
      throw ConfigurationError("run_ftrl_linear: cost vector with ||f|| > 1");
    }
  }
  double eta = rule.eta;
  if (rule.mode == StepMode::kOracle) {
    eta = ftrl_linear_eta(total_variation(*scenario));
  } else if (rule.mode == StepMode::kDoubling) {
    throw ContractViolation("run_ftrl_linear: doubling rule not supported");
  }
  require_eta(eta, std::numeric_limits<double>::max(), "run_ftrl_linear");
  return run_plain_ftrl(AlgorithmId::kFtrlLinear, std::move(scenario), eta,
                        rule.mode);
}

RunTrace run_ftrl_on_gradients(ScenarioPtr scenario, double eta) {
  require_scenario(scenario);
  require_eta(eta, std::numeric_limits<double>::max(), "run_ftrl_on_gradients");
  return run_plain_ftrl(AlgorithmId::kFtrlGradients, std::move(scenario), eta,
                        StepMode::kFixed);
}

RunTrace run_improved_ftrl(ScenarioPtr scenario, StepSizeRule rule) {
  if (rule.mode == StepMode::kDoubling) {
    return adaptive_eta(AlgorithmId::kImprovedFtrl, std::move(scenario));
  }
  return run_two_sequence(AlgorithmId::kImprovedFtrl, std::move(scenario),
                          MirrorMap::euclidean(), rule);
}

RunTrace run_prox(ScenarioPtr scenario, StepSizeRule rule) {
  if (rule.mode == StepMode::kDoubling) {
    return adaptive_eta(AlgorithmId::kProx, std::move(scenario));
  }
  return run_two_sequence(AlgorithmId::kProx, std::move(scenario),
                          MirrorMap::euclidean(), rule);
}

RunTrace run_general_prox(ScenarioPtr scenario, const MirrorMap& map,
                          StepSizeRule rule) {
  if (rule.mode == StepMode::kDoubling) {
    throw ContractViolation("run_general_prox: doubling rule not supported");
  }
  return run_two_sequence(AlgorithmId::kGeneralProx, std::move(scenario), map,
                          rule);
}

BanditParameters bandit_theorem_parameters(double lipschitz, double smoothness,
                                           double inner_radius, std::size_t dim,
                                           std::size_t horizon,
                                           double evar_cost) {
  if (!(inner_radius > 0.0)) {
    throw ConfigurationError("bandit parameters need an inner radius r > 0");
  }
  const double d = static_cast<double>(dim);
  const double root_e = std::sqrt(std::max(evar_cost, 0.0));
  const double scale = std::max(lipschitz, root_e);
  BanditParameters p;
  p.delta = std::sqrt(4.0 * d * scale /
                      ((d * smoothness + lipschitz * (1.0 + 1.0 / inner_radius)) *
                       static_cast<double>(horizon)));
  const double ratio = root_e > 0.0 ? std::min(1.0, lipschitz / root_e) : 1.0;
  p.eta = p.delta / (4.0 * d) * ratio;
  p.alpha = p.delta / inner_radius;
  return p;
}

RunTrace run_bandit(ScenarioPtr scenario, const BanditParameters& params,
                    std::uint64_t seed) {
  require_scenario(scenario);
  const Scenario& sc = *scenario;
  const FeasibleSet& set = sc.set();
  if (!set.contains_origin() || !(set.inner_radius() > 0.0)) {
    throw ConfigurationError("bandit: feasible set " + set.describe() +
                             " must contain a ball r*B with r > 0");
  }
  const double r = set.inner_radius();
  const double delta = params.delta;
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ContractViolation("bandit: delta must be positive");
  }
  if (std::fabs(params.alpha - delta / r) >
      1e-12 * std::max(1.0, delta / r)) {
    throw ContractViolation("alpha must equal delta/r");
  }
  if (!(params.alpha < 1.0)) {
    throw ContractViolation("bandit: delta/r must be below 1");
  }
  require_eta(params.eta, std::numeric_limits<double>::max(), "bandit");
  const double g_const = params.stiffness_constant.value_or(sc.lipschitz_bound());
  if (!(g_const > 0.0)) throw ContractViolation("bandit: stiffness constant <= 0");
  const double stiffness = g_const / params.eta;
  const FeasibleSet working = shrink(set, params.alpha);

  const std::size_t d = sc.dim();
  const double dd = static_cast<double>(d);
  SplitMix64 rng(seed);

  RunTrace trace;
  trace.scenario = scenario;
  trace.algorithm = AlgorithmId::kBandit;
  trace.step_mode = StepMode::kFixed;
  trace.seed = seed;
  trace.delta = delta;
  trace.shrink_alpha = params.alpha;
  trace.stiffness_constant = g_const;
  trace.z0 = Point(d, 0.0);
  trace.rounds.reserve(sc.horizon());

  Point z(d, 0.0);
  Point g_prev(d, 0.0);        // g_{t-1}(z_{t-1})
  Point diffs_prev(d, 0.0);    // c_{t-1}(z_{t-1} + delta e_i) - c_{t-1}(z_{t-1})
  Point probe_point(d);

  auto query = [&](RoundRecord& rec, const CostFunction& c,
                   std::span<const double> p) {
    if (!set.contains(p)) {
      throw std::logic_error("bandit: query point left the feasible set");
    }
    const double v = c.value(p);
    rec.query_points.insert(rec.query_points.end(), p.begin(), p.end());
    rec.query_values.push_back(v);
    return v;
  };

  for (std::size_t t = 1; t <= sc.horizon(); ++t) {
    const CostFunction& cost = sc.cost(t);
    RoundRecord rec;
    rec.t = t;
    rec.eta = params.eta;
    rec.z_prev = z;
    rec.query_points.reserve((d + 3) * d);
    rec.query_values.reserve(d + 3);

    rec.x = linearized_step(working, z, g_prev, stiffness);
    const std::size_t i = static_cast<std::size_t>(rng.index(d));
    rec.probe = i;

    const double v0 = query(rec, cost, rec.x);
    probe_point = rec.x;
    probe_point[i] += delta;
    const double v1 = query(rec, cost, probe_point);

    // g~ = g^_t(x_t, e_i) + g_{t-1}(z_{t-1}) - g^_{t-1}(z_{t-1}, e_i)
    Point g_tilde = g_prev;
    g_tilde[i] += dd / delta * (v1 - v0) - dd / delta * diffs_prev[i];
    z = linearized_step(working, z, g_tilde, stiffness);

    const double w0 = query(rec, cost, z);
    for (std::size_t j = 0; j < d; ++j) {
      probe_point = z;
      probe_point[j] += delta;
      diffs_prev[j] = query(rec, cost, probe_point) - w0;
      g_prev[j] = diffs_prev[j] / delta;
    }

    rec.z = z;
    rec.raw_cost = v0;
    rec.cost = 0.5 * (v0 + v1);
    trace.rounds.push_back(std::move(rec));
  }
  return trace;
}

RunTrace adaptive_eta(AlgorithmId base, ScenarioPtr scenario) {
  require_scenario(scenario);
  if (base != AlgorithmId::kImprovedFtrl && base != AlgorithmId::kProx) {
    throw ContractViolation("adaptive_eta: base must be improved_ftrl or prox");
  }
  const Scenario& sc = *scenario;
  const FeasibleSet& set = sc.set();
  const double l = sc.smoothness_bound();
  const MirrorMap map = MirrorMap::euclidean();

  RunTrace trace;
  trace.scenario = scenario;
  trace.algorithm = base;
  trace.step_mode = StepMode::kDoubling;
  trace.adaptive = true;
  trace.z0 = Point(sc.dim(), 0.0);
  trace.epoch_starts.clear();
  trace.rounds.reserve(sc.horizon());

  double guess = l * l;
  double running = 0.0;
  double eta = 0.0;
  std::unique_ptr<Learner> learner;
  auto start_epoch = [&](std::size_t t) {
    eta = base == AlgorithmId::kImprovedFtrl ? improved_ftrl_eta(l, guess)
                                             : prox_eta(l, guess);
    if (base == AlgorithmId::kImprovedFtrl) {
      learner = std::make_unique<ImprovedFtrlLearner>(set, l / eta);
    } else {
      learner = std::make_unique<ProxLearner>(set, map, Point(sc.dim(), 0.0),
                                              l / eta);
    }
    running = 0.0;
    trace.epoch_starts.push_back(t);
    trace.epoch_guesses.push_back(guess);
  };

  start_epoch(1);
  for (std::size_t t = 1; t <= sc.horizon(); ++t) {
    trace.rounds.push_back(play_round(*learner, sc, t, eta));
    running += learner->last_variation_term();
    if (running > guess && t < sc.horizon()) {
      guess *= 4.0;
      start_epoch(t + 1);
    }
  }
  return trace;
}

}  // namespace varbound
