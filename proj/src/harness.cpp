#include "varbound/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"

namespace varbound {
namespace {

constexpr double kCheckTol = 1e-8;

double mapping_norm(const AggregateQuadratic& f, const FeasibleSet& set,
                    std::span<const double> x, double step, Point& grad,
                    Point& trial) {
  f.gradient_into(x, grad);
  trial.assign(x.begin(), x.end());
  kernels::axpy(-step, grad, trial);
  const Point p = set.project(trial);
  return std::sqrt(kernels::squared_distance(x, p)) / step;
}

double certificate(const AggregateQuadratic& f, const FeasibleSet& set,
                   std::span<const double> x, const OfflineOptions& options) {
  Point grad(f.dim), diff(f.dim);
  f.gradient_into(x, grad);
  SplitMix64 rng(options.seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < options.certificate_samples; ++s) {
    const Point u = set.sample(rng);
    kernels::sub(x, u, diff);
    worst = std::max(worst, kernels::dot(grad, diff));
  }
  return worst;
}

double total_cost(const RunTrace& trace) {
  double s = 0.0;
  for (const auto& r : trace.rounds) s += r.cost;
  return s;
}

void require_trace(const RunTrace& trace) {
  if (!trace.scenario) throw ContractViolation("trace has no scenario");
  if (trace.rounds.size() != trace.scenario->horizon()) {
    throw ContractViolation("trace is incomplete");
  }
}

void require_eta_match(const RunTrace& trace, double prescribed,
                       const char* who) {
  for (const auto& r : trace.rounds) {
    if (std::fabs(r.eta - prescribed) > 1e-9 * prescribed) {
      std::ostringstream os;
      os << who << ": trace eta " << r.eta << " at t=" << r.t
         << " differs from the prescribed " << prescribed;
      throw ContractViolation(os.str());
    }
  }
}

MirrorMap map_of(const RunTrace& trace) {
  return trace.map == MirrorKind::kEntropy ? MirrorMap::entropy()
                                           : MirrorMap::euclidean();
}

}  // namespace

OfflineSolution minimize_aggregate(const AggregateQuadratic& objective,
                                   const FeasibleSet& set, double step,
                                   const Point* warm_start,
                                   const OfflineOptions& options) {
  if (!(step > 0.0)) throw ContractViolation("offline: step must be positive");
  const std::size_t d = objective.dim;
  Point x = warm_start ? set.project(*warm_start) : set.project(Point(d, 0.0));
  Point y = x, grad(d), trial(d), x_next(d);
  double theta = 1.0;
  double residual = mapping_norm(objective, set, x, step, grad, trial);
  std::size_t it = 0;
  while (residual > options.tolerance) {
    if (it == options.max_iterations) {
      std::ostringstream os;
      os << "offline_best: no convergence in " << it
         << " iterations, mapping norm " << residual;
      throw ConvergenceError(os.str(), x, residual);
    }
    ++it;
    objective.gradient_into(y, grad);
    trial = y;
    kernels::axpy(-step, grad, trial);
    x_next = set.project(trial);
    // Gradient restart: drop momentum when the step from y points back
    // against the direction of travel. Needs no objective values, which are
    // too noisy near the optimum when T is large.
    double along = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      along += (y[k] - x_next[k]) * (x_next[k] - x[k]);
    }
    if (along > 0.0) {
      theta = 1.0;
      y = x_next;
    } else {
      const double theta_next =
          0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
      const double beta = (theta - 1.0) / theta_next;
      for (std::size_t k = 0; k < d; ++k) {
        y[k] = x_next[k] + beta * (x_next[k] - x[k]);
      }
      theta = theta_next;
    }
    x.swap(x_next);
    residual = mapping_norm(objective, set, x, step, grad, trial);
  }
  OfflineSolution out;
  out.value = objective.value(x);
  out.mapping_norm = residual;
  out.iterations = it;
  out.certificate = certificate(objective, set, x, options);
  out.point = std::move(x);
  return out;
}

OfflineSolution offline_best(const Scenario& scenario,
                             const OfflineOptions& options) {
  AggregateQuadratic f(scenario.dim());
  for (const auto& c : scenario.costs()) f.add(c);
  const double step = 1.0 / (static_cast<double>(scenario.horizon()) *
                             scenario.smoothness_bound());
  OfflineSolution best =
      minimize_aggregate(f, scenario.set(), step, nullptr, options);
  // The aggregate's constant term cancels badly when F* is near zero.
  double direct = 0.0;
  for (const auto& c : scenario.costs()) direct += c.value(best.point);
  best.value = direct;
  return best;
}

RegretReport regret(const RunTrace& trace, const OfflineOptions& options) {
  require_trace(trace);
  const OfflineSolution best = offline_best(*trace.scenario, options);
  RegretReport rep;
  rep.cumulative_cost = total_cost(trace);
  rep.best_fixed_cost = best.value;
  rep.regret = rep.cumulative_cost - rep.best_fixed_cost;
  rep.best_point = best.point;
  rep.certificate = best.certificate;
  return rep;
}

std::vector<double> prefix_regret(const RunTrace& trace,
                                  const OfflineOptions& options) {
  require_trace(trace);
  const Scenario& sc = *trace.scenario;
  AggregateQuadratic f(sc.dim());
  std::vector<double> out;
  out.reserve(trace.rounds.size());
  Point warm = sc.set().project(Point(sc.dim(), 0.0));
  double cum = 0.0;
  for (const auto& r : trace.rounds) {
    f.add(sc.cost(r.t));
    cum += r.cost;
    const double step =
        1.0 / (static_cast<double>(r.t) * sc.smoothness_bound());
    OfflineSolution s = minimize_aggregate(f, sc.set(), step, &warm, options);
    out.push_back(cum - s.value);
    warm = std::move(s.point);
  }
  return out;
}

RegretStatistics summarize(std::span<const double> regrets) {
  RegretStatistics s;
  s.count = regrets.size();
  if (regrets.empty()) return s;
  double sum = 0.0;
  for (double v : regrets) sum += v;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double ss = 0.0;
    for (double v : regrets) ss += (v - s.mean) * (v - s.mean);
    const double var = ss / static_cast<double>(s.count - 1);
    s.standard_error = std::sqrt(var / static_cast<double>(s.count));
  }
  return s;
}

std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::kEq2:
      return "eq2";
    case TheoremId::kThm1:
      return "thm1";
    case TheoremId::kThm2:
      return "thm2";
    case TheoremId::kThm3:
      return "thm3";
    case TheoremId::kThm4:
      return "thm4";
    case TheoremId::kLemma1:
      return "lemma1";
    case TheoremId::kLemma2Step:
      return "lemma2-step";
  }
  return "unknown";
}

TheoremId theorem_from_string(const std::string& name) {
  for (auto id : {TheoremId::kEq2, TheoremId::kThm1, TheoremId::kThm2,
                  TheoremId::kThm3, TheoremId::kThm4, TheoremId::kLemma1,
                  TheoremId::kLemma2Step}) {
    if (to_string(id) == name) return id;
  }
  throw ConfigurationError("unknown check '" + name + "'");
}

double BoundCheck::relative_margin() const {
  return margin / std::max(1.0, std::fabs(rhs));
}

BoundCheck make_check(TheoremId id, double lhs, double rhs) {
  BoundCheck c;
  c.theorem = id;
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.satisfied = lhs <= rhs + kCheckTol * std::max(1.0, std::fabs(rhs));
  return c;
}

void keep_worst(BoundCheck& worst, const BoundCheck& candidate) {
  if (candidate.relative_margin() < worst.relative_margin()) worst = candidate;
}

BoundCheck check_lemma1(const RunTrace& trace) {
  require_trace(trace);
  if (trace.algorithm != AlgorithmId::kImprovedFtrl || trace.adaptive) {
    throw ContractViolation("check_lemma1: needs a fixed-eta improved_ftrl trace");
  }
  const Scenario& sc = *trace.scenario;
  const FeasibleSet& set = sc.set();
  const std::size_t d = sc.dim();
  const double l = sc.smoothness_bound();
  const double eta = trace.rounds.empty() ? 1.0 : trace.rounds.front().eta;
  require_eta_match(trace, eta, "check_lemma1");
  const double stiffness = l / eta;

  Point sum(d, 0.0), g(d), g_before(d);
  double constant = 0.0;  // sum c_t(z_{t-1}) - z_{t-1}'grad c_t(z_{t-1})
  double played = 0.0;
  double variation = 0.0;
  BoundCheck worst = make_check(TheoremId::kLemma1, 0.0,
                                std::numeric_limits<double>::infinity());
  for (const auto& r : trace.rounds) {
    const CostFunction& c = sc.cost(r.t);
    c.gradient_into(r.z_prev, g);
    sc.cost(r.t - 1).gradient_into(r.z_prev, g_before);
    variation += kernels::squared_distance(g, g_before);
    kernels::axpy(1.0, g, sum);
    constant += c.value(r.z_prev) - kernels::dot(r.z_prev, g);
    played += c.value(r.x);

    const Point x_hat = ftrl_solve(set, sum, stiffness);
    const double rhs = 0.5 * stiffness * kernels::squared_norm(x_hat) +
                       kernels::dot(sum, x_hat) + constant +
                       variation / (2.0 * stiffness);
    BoundCheck c_t = make_check(TheoremId::kLemma1, played, rhs);
    c_t.worst_round = r.t;
    if (r.t == 1) {
      worst = c_t;
    } else {
      keep_worst(worst, c_t);
    }
  }
  if (trace.rounds.empty()) worst = make_check(TheoremId::kLemma1, 0.0, 0.0);
  return worst;
}

BoundCheck check_prox_lemma(const ProxStep& step, const FeasibleSet& set,
                            const MirrorMap& map, std::size_t u_samples,
                            SplitMix64& rng) {
  const std::size_t d = set.dim();
  Point diff(d);
  kernels::sub(step.xi, step.zeta, diff);
  const double dn = map.dual_norm(diff);
  kernels::sub(step.x, step.z, diff);
  const double n1 = map.norm(diff);
  kernels::sub(step.x, step.z_next, diff);
  const double n2 = map.norm(diff);
  const double a = map.alpha();
  const double fixed = (step.gamma * step.gamma / a) * dn * dn -
                       0.5 * a * (n1 * n1 + n2 * n2);

  auto evaluate = [&](std::span<const double> u) {
    kernels::sub(step.x, u, diff);
    const double lhs = step.gamma * kernels::dot(step.zeta, diff);
    const double rhs =
        map.bregman(u, step.z) - map.bregman(u, step.z_next) + fixed;
    return make_check(TheoremId::kLemma2Step, lhs, rhs);
  };

  BoundCheck worst = evaluate(step.x);
  keep_worst(worst, evaluate(step.z_next));
  for (std::size_t s = 0; s < u_samples; ++s) {
    const Point u = set.sample(rng);
    keep_worst(worst, evaluate(u));
  }
  return worst;
}

BoundCheck check_prox_trace(const RunTrace& trace, std::size_t u_samples,
                            std::uint64_t seed) {
  require_trace(trace);
  if (trace.algorithm != AlgorithmId::kProx &&
      trace.algorithm != AlgorithmId::kGeneralProx) {
    throw ContractViolation("check_prox_trace: needs a prox trace");
  }
  const Scenario& sc = *trace.scenario;
  const MirrorMap map = map_of(trace);
  const double l = sc.smoothness_bound();
  SplitMix64 rng(seed);

  BoundCheck worst = make_check(TheoremId::kLemma2Step, 0.0, 0.0);
  std::size_t epoch = 0;
  bool first = true;
  for (const auto& r : trace.rounds) {
    bool epoch_start = false;
    while (epoch < trace.epoch_starts.size() && trace.epoch_starts[epoch] == r.t) {
      epoch_start = true;
      ++epoch;
    }
    ProxStep step;
    step.z = r.z_prev;
    step.x = r.x;
    step.z_next = r.z;
    step.gamma = r.eta / l;
    // The learner's previous gradient is zero at the start of every epoch.
    step.xi = epoch_start ? Point(sc.dim(), 0.0)
                          : sc.cost(r.t - 1).gradient(r.z_prev);
    step.zeta = sc.cost(r.t).gradient(r.x);
    BoundCheck c = check_prox_lemma(step, sc.set(), map, u_samples, rng);
    c.worst_round = r.t;
    if (first) {
      worst = c;
      first = false;
    } else {
      keep_worst(worst, c);
    }
  }
  return worst;
}

BoundCheck check_theorem_bound(const RunTrace& trace, TheoremId theorem,
                               const OfflineOptions& options) {
  require_trace(trace);
  const Scenario& sc = *trace.scenario;
  const double l = sc.smoothness_bound();
  auto refuse = [&](const std::string& why) {
    throw ContractViolation("check " + to_string(theorem) + ": " + why);
  };
  if (trace.adaptive) refuse("bound is not claimed for doubling-trick runs");

  double rhs = 0.0;
  std::ostringstream note;
  note.precision(17);
  switch (theorem) {
    case TheoremId::kEq2: {
      if (trace.algorithm != AlgorithmId::kFtrlLinear) {
        refuse("needs an ftrl_linear trace");
      }
      const double var = total_variation(sc);
      require_eta_match(trace, ftrl_linear_eta(var), "eq2");
      const double root = std::sqrt(var);
      rhs = root >= 12.0 ? 15.0 * root : 150.0;
      note << "VAR=" << var;
      break;
    }
    case TheoremId::kThm1:
    case TheoremId::kThm2: {
      const bool ftrl = theorem == TheoremId::kThm1;
      if (trace.algorithm !=
          (ftrl ? AlgorithmId::kImprovedFtrl : AlgorithmId::kProx)) {
        refuse(ftrl ? "needs an improved_ftrl trace" : "needs a prox trace");
      }
      const double e = evar_sequential(trace);
      require_eta_match(trace, ftrl ? improved_ftrl_eta(l, e) : prox_eta(l, e),
                        to_string(theorem).c_str());
      rhs = (ftrl ? 1.0 : 2.0) * std::max(l, std::sqrt(e));
      note << "EVAR=" << e << " L=" << l;
      break;
    }
    case TheoremId::kThm3: {
      if (trace.algorithm != AlgorithmId::kGeneralProx) {
        refuse("needs a general_prox trace");
      }
      const MirrorMap map = map_of(trace);
      const double e = evar_general_norm(trace, map);
      const double radius = map.diameter(sc.set());
      const double a = map.alpha();
      require_eta_match(trace, general_prox_eta(l, radius, a, e), "thm3");
      rhs = 2.0 * radius * std::max(l * radius / std::sqrt(a), std::sqrt(e));
      note << "EVAR_gs=" << e << " R=" << radius << " L=" << l;
      break;
    }
    case TheoremId::kThm4:
      refuse("the bandit bound needs a trace collection");
      break;
    default:
      refuse("not a regret bound");
  }
  BoundCheck c =
      make_check(theorem, regret(trace, options).regret, rhs);
  c.note = note.str();
  return c;
}

BoundCheck check_bandit_theorem(std::span<const RunTrace> traces,
                                double evar_cost,
                                const OfflineOptions& options) {
  if (traces.size() < 100) {
    throw ContractViolation("check thm4: needs at least 100 seeded runs");
  }
  const ScenarioPtr& scp = traces.front().scenario;
  if (!scp) throw ContractViolation("check thm4: trace has no scenario");
  const Scenario& sc = *scp;
  const double g = sc.lipschitz_bound();
  const double l = sc.smoothness_bound();
  const double r = sc.set().inner_radius();
  const std::size_t d = sc.dim();
  const std::size_t horizon = sc.horizon();
  const BanditParameters p =
      bandit_theorem_parameters(g, l, r, d, horizon, evar_cost);

  auto close = [](double a, double b) {
    return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b));
  };
  for (const auto& t : traces) {
    require_trace(t);
    if (t.scenario != scp || t.algorithm != AlgorithmId::kBandit) {
      throw ContractViolation("check thm4: traces must be bandit runs of one scenario");
    }
    if (!close(t.delta, p.delta) || !close(t.shrink_alpha, p.alpha) ||
        !close(t.stiffness_constant, g) ||
        (!t.rounds.empty() && !close(t.rounds.front().eta, p.eta))) {
      throw ContractViolation(
          "check thm4: run parameters differ from the prescribed delta, eta, alpha");
    }
  }

  const OfflineSolution best = offline_best(sc, options);
  std::vector<double> regrets;
  regrets.reserve(traces.size());
  for (const auto& t : traces) regrets.push_back(total_cost(t) - best.value);
  const RegretStatistics stats = summarize(regrets);

  const double dd = static_cast<double>(d);
  const double rhs =
      4.0 * std::sqrt(std::max(g, std::sqrt(std::max(evar_cost, 0.0))) * dd *
                      (dd * l + g * (1.0 + 1.0 / r)) *
                      static_cast<double>(horizon));
  BoundCheck c = make_check(TheoremId::kThm4,
                            stats.mean - 2.0 * stats.standard_error, rhs);
  std::ostringstream note;
  note.precision(17);
  note << "mean=" << stats.mean << " stderr=" << stats.standard_error
       << " runs=" << stats.count << " EVAR_cs=" << evar_cost;
  c.note = note.str();
  return c;
}

BoundCheck check_bandit_estimator(const CostFunction& cost,
                                  const FeasibleSet& set,
                                  std::span<const double> x, double delta) {
  const std::size_t d = x.size();
  if (!(delta > 0.0)) throw ContractViolation("estimator: delta must be positive");
  if (!set.contains(x)) throw ContractViolation("estimator: x is infeasible");
  const double dd = static_cast<double>(d);
  const double base = cost.value(x);
  Point probe(x.begin(), x.end());
  Point expectation(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    probe[i] += delta;
    if (!set.contains(probe)) {
      throw ContractViolation("estimator: probe x + delta e_i is infeasible");
    }
    // (1/d) * (d/delta) (c(x + delta e_i) - c(x)) e_i
    expectation[i] = (dd / delta * (cost.value(probe) - base)) / dd;
    probe[i] = x[i];
  }
  const Point grad = cost.gradient(x);
  const double bias = std::sqrt(kernels::squared_distance(expectation, grad));
  BoundCheck c =
      make_check(TheoremId::kThm4, bias, dd * cost.smoothness() * delta / 2.0);
  c.note = "estimator bias";
  return c;
}

EstimatorIdentity bandit_estimator_identity(const CostFunction& previous,
                                            const CostFunction& current,
                                            std::span<const double> x,
                                            std::span<const double> z_prev,
                                            double delta) {
  const std::size_t d = x.size();
  const double dd = static_cast<double>(d);
  auto forward = [&](const CostFunction& c, std::span<const double> at) {
    Point diffs(d);
    Point probe(at.begin(), at.end());
    const double base = c.value(at);
    for (std::size_t i = 0; i < d; ++i) {
      probe[i] += delta;
      diffs[i] = c.value(probe) - base;
      probe[i] = at[i];
    }
    return diffs;
  };
  const Point now = forward(current, x);
  const Point before = forward(previous, z_prev);
  Point g_prev(d);
  for (std::size_t i = 0; i < d; ++i) g_prev[i] = before[i] / delta;

  Point mean_hat(d, 0.0), mean_tilde(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    // Same arithmetic as the learner's estimator for probe coordinate i.
    Point tilde = g_prev;
    tilde[i] += dd / delta * now[i] - dd / delta * before[i];
    for (std::size_t k = 0; k < d; ++k) mean_tilde[k] += tilde[k] / dd;
    mean_hat[i] += (dd / delta * now[i]) / dd;
  }
  EstimatorIdentity out;
  for (std::size_t k = 0; k < d; ++k) {
    out.mean_vs_full =
        std::max(out.mean_vs_full, std::fabs(mean_hat[k] - now[k] / delta));
    out.tilde_vs_hat =
        std::max(out.tilde_vs_hat, std::fabs(mean_tilde[k] - mean_hat[k]));
  }
  return out;
}

}  // namespace varbound
