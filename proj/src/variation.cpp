#include "varbound/variation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"

namespace varbound {
namespace {

// c_b - c_a as 0.5 x'Mx + m'x + k.
struct FormDifference {
  std::size_t dim;
  std::vector<double> m_mat;
  Point m_vec;
  double k = 0.0;
  bool affine = true;
};

FormDifference difference(const CostFunction& a, const CostFunction& b) {
  const auto& fa = a.canonical();
  const auto& fb = b.canonical();
  FormDifference out;
  out.dim = a.dim();
  out.m_mat.assign(out.dim * out.dim, 0.0);
  if (fb.hessian) kernels::axpy(1.0, fb.hessian->entries(), out.m_mat);
  if (fa.hessian) kernels::axpy(-1.0, fa.hessian->entries(), out.m_mat);
  out.affine = std::all_of(out.m_mat.begin(), out.m_mat.end(),
                           [](double v) { return v == 0.0; });
  out.m_vec.resize(out.dim);
  kernels::sub(fb.linear, fa.linear, out.m_vec);
  out.k = fb.constant - fa.constant;
  return out;
}

// Ascent step for an objective whose gradient is Lipschitz with constant
// `curvature`; unit step when the objective is affine.
double ascent_step(double curvature) {
  return curvature > 0.0 ? 1.0 / curvature : 1.0;
}

// Lower bound on max over the set of a smooth objective: best of `samples`
// random points, then projected gradient ascent from the best `restarts`.
double search_max(const FeasibleSet& set,
                  const std::function<double(std::span<const double>)>& f,
                  const std::function<void(std::span<const double>,
                                           std::span<double>)>& grad,
                  double step, const MaxSearchOptions& opt) {
  SplitMix64 rng(opt.seed);
  std::vector<std::pair<double, Point>> pool;
  pool.reserve(opt.samples + 1);
  pool.emplace_back(f(set.project(Point(set.dim(), 0.0))),
                    set.project(Point(set.dim(), 0.0)));
  for (std::size_t s = 0; s < opt.samples; ++s) {
    Point p = set.sample(rng);
    const double v = f(p);
    pool.emplace_back(v, std::move(p));
  }
  const std::size_t starts = std::min(opt.restarts, pool.size());
  std::partial_sort(pool.begin(), pool.begin() + static_cast<long>(starts),
                    pool.end(), [](const auto& l, const auto& r) {
                      return l.first > r.first;
                    });
  double best = pool.front().first;
  Point g(set.dim());
  for (std::size_t s = 0; s < starts; ++s) {
    Point x = pool[s].second;
    for (std::size_t k = 0; k < opt.ascent_steps; ++k) {
      grad(x, g);
      kernels::axpy(step, g, x);
      x = set.project(x);
      best = std::max(best, f(x));
    }
  }
  return best;
}

}  // namespace

double total_variation(std::span<const Point> vectors) {
  if (vectors.empty()) return 0.0;
  const std::size_t d = vectors.front().size();
  Point mean(d, 0.0);
  for (const auto& v : vectors) kernels::axpy(1.0, v, mean);
  kernels::scale(1.0 / static_cast<double>(vectors.size()), mean, mean);
  double total = 0.0;
  for (const auto& v : vectors) total += kernels::squared_distance(v, mean);
  return total;
}

double total_variation(const Scenario& scenario) {
  std::vector<Point> f;
  f.reserve(scenario.horizon());
  for (const auto& c : scenario.costs()) {
    if (c.family() != CostFamily::kLinear) {
      throw ConfigurationError("total_variation: scenario " + scenario.id() +
                               " has non-linear costs");
    }
    f.push_back(c.vector());
  }
  return total_variation(f);
}

Estimate max_gradient_difference(const CostFunction& a, const CostFunction& b,
                                 const FeasibleSet& set,
                                 const MaxSearchOptions& options) {
  const FormDifference diff = difference(a, b);
  if (diff.affine && options.closed_form) {
    return {kernels::squared_norm(diff.m_vec), true};
  }
  const std::size_t d = diff.dim;
  Point buf(d);
  auto residual = [&](std::span<const double> x, std::span<double> out) {
    kernels::matvec(diff.m_mat, x, out);
    kernels::axpy(1.0, diff.m_vec, out);
  };
  auto f = [&](std::span<const double> x) {
    residual(x, buf);
    return kernels::squared_norm(buf);
  };
  // grad ||Mx + m||^2 = 2 M (Mx + m) with M symmetric.
  Point r(d);
  auto grad = [&](std::span<const double> x, std::span<double> out) {
    residual(x, r);
    kernels::matvec(diff.m_mat, r, out);
    kernels::scale(2.0, out, out);
  };
  const double step =
      ascent_step(2.0 * kernels::squared_norm(diff.m_mat));
  return {search_max(set, f, grad, step, options), false};
}

Estimate max_value_difference(const CostFunction& a, const CostFunction& b,
                              const FeasibleSet& set,
                              const MaxSearchOptions& options) {
  const FormDifference diff = difference(a, b);
  if (diff.affine && options.closed_form) {
    Point neg(diff.dim);
    kernels::scale(-1.0, diff.m_vec, neg);
    const double hi = set.support(diff.m_vec) + diff.k;
    const double lo = -set.support(neg) + diff.k;
    return {std::max(std::fabs(hi), std::fabs(lo)), true};
  }
  const std::size_t d = diff.dim;
  Point buf(d);
  auto psi = [&](std::span<const double> x) {
    kernels::matvec(diff.m_mat, x, buf);
    return 0.5 * kernels::dot(x, buf) + kernels::dot(diff.m_vec, x) + diff.k;
  };
  auto psi_grad = [&](std::span<const double> x, std::span<double> out) {
    kernels::matvec(diff.m_mat, x, out);
    kernels::axpy(1.0, diff.m_vec, out);
  };
  const double step =
      ascent_step(std::sqrt(kernels::squared_norm(diff.m_mat)));
  const double up = search_max(set, psi, psi_grad, step, options);
  const double down = search_max(
      set, [&](std::span<const double> x) { return -psi(x); },
      [&](std::span<const double> x, std::span<double> out) {
        psi_grad(x, out);
        kernels::scale(-1.0, out, out);
      },
      step, options);
  return {std::max({std::fabs(up), std::fabs(down), 0.0}), false};
}

Estimate sequential_variation(const Scenario& scenario,
                              const MaxSearchOptions& options) {
  if (scenario.horizon() < 2) {
    throw ContractViolation("sequential_variation: need T >= 2");
  }
  Estimate total{0.0, true};
  for (std::size_t t = 1; t < scenario.horizon(); ++t) {
    const Estimate e = max_gradient_difference(
        scenario.cost(t), scenario.cost(t + 1), scenario.set(), options);
    total.value += e.value;
    total.exact = total.exact && e.exact;
  }
  return total;
}

Estimate evar_cost_values(const Scenario& scenario,
                          const MaxSearchOptions& options) {
  Estimate total{0.0, true};
  for (std::size_t t = 0; t < scenario.horizon(); ++t) {
    const Estimate e = max_value_difference(
        scenario.cost(t), scenario.cost(t + 1), scenario.set(), options);
    total.value += e.value;
    total.exact = total.exact && e.exact;
  }
  return total;
}

double evar_general_norm(const RunTrace& trace, const MirrorMap& map) {
  if (!trace.scenario || trace.scenario->horizon() < trace.rounds.size()) {
    throw ContractViolation("evar: trace does not match its scenario");
  }
  const Scenario& sc = *trace.scenario;
  Point now(sc.dim()), before(sc.dim());
  double total = 0.0;
  for (const auto& r : trace.rounds) {
    sc.cost(r.t).gradient_into(r.z_prev, now);
    sc.cost(r.t - 1).gradient_into(r.z_prev, before);
    kernels::sub(now, before, now);
    const double n = map.dual_norm(now);
    total += n * n;
  }
  return total;
}

double evar_sequential(const RunTrace& trace) {
  return evar_general_norm(trace, MirrorMap::euclidean());
}

VarDecomposition var_decomposition(const RunTrace& trace) {
  const std::size_t n = trace.rounds.size();
  if (n > kMaxDecompositionHorizon) {
    throw ResourceError("var_decomposition: T exceeds 5000");
  }
  VarDecomposition out;
  if (n == 0) return out;
  const Scenario& sc = *trace.scenario;
  const std::size_t d = sc.dim();
  std::vector<Point> own(n, Point(d));  // grad c_t(x_t)
  for (std::size_t t = 0; t < n; ++t) {
    sc.cost(t + 1).gradient_into(trace.rounds[t].x, own[t]);
  }
  Point cross(d);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const CostFunction& c = sc.cost(t + 1);
    for (std::size_t s = 0; s < n; ++s) {
      c.gradient_into(trace.rounds[s].x, cross);  // grad c_t(x_s)
      s1 += kernels::squared_distance(own[t], cross);
      s2 += kernels::squared_distance(cross, own[s]);
    }
  }
  out.var1 = s1 / static_cast<double>(n);
  out.var2 = s2 / static_cast<double>(n);
  out.realized_total_variation = total_variation(own);
  return out;
}

VariationReport variation_report(const RunTrace& trace,
                                 const MaxSearchOptions& options) {
  const Scenario& sc = *trace.scenario;
  VariationReport rep;
  if (sc.all_linear()) {
    bool all_linear = std::all_of(
        sc.costs().begin(), sc.costs().end(),
        [](const CostFunction& c) { return c.family() == CostFamily::kLinear; });
    if (all_linear) rep.total_var = total_variation(sc);
  }
  if (sc.horizon() >= 2) rep.seq_var = sequential_variation(sc, options);
  rep.evar_seq = evar_sequential(trace);
  if (trace.algorithm == AlgorithmId::kGeneralProx) {
    const MirrorMap map = trace.map == MirrorKind::kEntropy
                              ? MirrorMap::entropy()
                              : MirrorMap::euclidean();
    rep.evar_general = evar_general_norm(trace, map);
  }
  rep.evar_cost = evar_cost_values(sc, options);
  if (trace.rounds.size() <= kMaxDecompositionHorizon) {
    rep.decomposition = var_decomposition(trace);
  }
  return rep;
}

}  // namespace varbound
