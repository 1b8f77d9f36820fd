#include "varbound/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "varbound/errors.hpp"
#include "varbound/kernels.hpp"
#include "varbound/scenarios.hpp"
#include "varbound/variation.hpp"

namespace varbound::cli {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& what) { throw ConfigurationError(what); }

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string joined(std::span<const double> v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += num(v[i]);
  }
  return s;
}

// ---------------------------------------------------------------- parsing

void only_keys(const json& j, std::initializer_list<const char*> keys,
               const std::string& where) {
  if (!j.is_object()) bad(where + ": expected an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(),
                     [&](const char* allowed) { return k == allowed; })) {
      bad(where + ": unknown key '" + k + "'");
    }
  }
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) bad(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(where + ": not finite");
  return v;
}

std::uint64_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    bad(where + ": expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

Point vec(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where + ": expected an array of numbers");
  Point out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<std::uint64_t> seed_list(const json& j, const std::string& where) {
  std::vector<std::uint64_t> out;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(count(j[i], where));
  } else if (j.is_object()) {
    only_keys(j, {"from", "to"}, where);
    if (!j.contains("from") || !j.contains("to")) bad(where + ": needs from and to");
    const auto from = count(j["from"], where + ".from");
    const auto to = count(j["to"], where + ".to");
    for (auto s = from; s <= to; ++s) out.push_back(s);
  } else {
    out.push_back(count(j, where));
  }
  if (out.empty()) bad(where + ": empty range");
  return out;
}

SetSpec parse_set(const json& j) {
  SetSpec s;
  if (j.is_string()) {
    s.kind = j.get<std::string>();
  } else {
    only_keys(j, {"kind", "radius", "lo", "hi"}, "scenario.set");
    if (!j.contains("kind")) bad("scenario.set: missing kind");
    s.kind = j["kind"].get<std::string>();
    if (j.contains("radius")) s.radius = number(j["radius"], "scenario.set.radius");
    if (j.contains("lo")) s.lo = vec(j["lo"], "scenario.set.lo");
    if (j.contains("hi")) s.hi = vec(j["hi"], "scenario.set.hi");
  }
  if (s.kind != "unit_ball" && s.kind != "ball" && s.kind != "box" &&
      s.kind != "simplex") {
    bad("scenario.set: unknown kind '" + s.kind + "'");
  }
  if (s.kind == "box" && (s.lo.empty() || s.lo.size() != s.hi.size())) {
    bad("scenario.set: box needs lo and hi of equal length");
  }
  return s;
}

bool has_variation(const std::string& family) {
  return family == "smooth_plus_drift" || family == "random_linear";
}

ScenarioSpec parse_scenario(const json& j) {
  only_keys(j,
            {"family", "T", "d", "seed", "variation", "center_radius",
             "curvature", "mean_radius", "f", "g", "set", "smoothness_bound",
             "lipschitz_bound"},
            "scenario");
  ScenarioSpec s;
  if (!j.contains("family") || !j["family"].is_string()) {
    bad("scenario: missing family");
  }
  s.family = j["family"].get<std::string>();
  static const char* families[] = {"identical_quadratic", "identical_linear",
                                   "smooth_plus_drift",   "random_linear",
                                   "switching_halves",    "random_quadratics"};
  if (std::none_of(std::begin(families), std::end(families),
                   [&](const char* f) { return s.family == f; })) {
    bad("scenario: unknown family '" + s.family + "'");
  }
  if (!j.contains("T")) bad("scenario: missing T");
  s.horizon = count(j["T"], "scenario.T");
  if (j.contains("f")) s.f = vec(j["f"], "scenario.f");
  if (j.contains("g")) s.g = vec(j["g"], "scenario.g");
  const bool fixed_vectors =
      s.family == "switching_halves" || s.family == "identical_linear";
  if (fixed_vectors) {
    if (s.f.empty()) bad("scenario: " + s.family + " needs f");
    if (s.family == "switching_halves" && s.g.size() != s.f.size()) {
      bad("scenario: switching_halves needs g with the length of f");
    }
    s.dim = s.f.size();
  }
  if (j.contains("d")) {
    const auto d = count(j["d"], "scenario.d");
    if (fixed_vectors && d != s.dim) bad("scenario: d does not match f");
    s.dim = d;
  } else if (!fixed_vectors) {
    bad("scenario: missing d");
  }
  if (j.contains("seed")) s.seed = count(j["seed"], "scenario.seed");
  if (j.contains("variation")) {
    if (!has_variation(s.family)) {
      bad("scenario: family " + s.family + " has no variation parameter");
    }
    s.variation = number(j["variation"], "scenario.variation");
  }
  if (j.contains("center_radius")) {
    s.center_radius = number(j["center_radius"], "scenario.center_radius");
  }
  if (j.contains("curvature")) s.curvature = number(j["curvature"], "scenario.curvature");
  if (j.contains("mean_radius")) {
    s.mean_radius = number(j["mean_radius"], "scenario.mean_radius");
  }
  if (j.contains("set")) s.set = parse_set(j["set"]);
  if (j.contains("smoothness_bound")) {
    s.smoothness_bound = number(j["smoothness_bound"], "scenario.smoothness_bound");
  }
  if (j.contains("lipschitz_bound")) {
    s.lipschitz_bound = number(j["lipschitz_bound"], "scenario.lipschitz_bound");
  }
  return s;
}

StepSizeRule parse_step(const json& j, bool& horizon_scaled) {
  if (j.is_string()) {
    const auto m = j.get<std::string>();
    if (m == "oracle") return StepSizeRule::oracle();
    if (m == "doubling") return StepSizeRule::doubling();
    bad("algorithm.step: '" + m + "' needs an eta; use {\"mode\": \"fixed\", \"eta\": ...}");
  }
  only_keys(j, {"mode", "eta", "horizon_scaled"}, "algorithm.step");
  const std::string m = j.value("mode", std::string("fixed"));
  if (m == "oracle") return StepSizeRule::oracle();
  if (m == "doubling") return StepSizeRule::doubling();
  if (m != "fixed") bad("algorithm.step: unknown mode '" + m + "'");
  if (!j.contains("eta")) bad("algorithm.step: fixed mode needs eta");
  if (j.contains("horizon_scaled")) horizon_scaled = j["horizon_scaled"].get<bool>();
  return StepSizeRule::fixed(number(j["eta"], "algorithm.step.eta"));
}

AlgorithmSpec parse_algorithm(const json& j) {
  only_keys(j, {"id", "label", "step", "map", "seed", "seeds", "bandit"},
            "algorithm");
  AlgorithmSpec a;
  if (!j.contains("id") || !j["id"].is_string()) bad("algorithm: missing id");
  a.id = algorithm_from_string(j["id"].get<std::string>());
  if (j.contains("step")) {
    if (a.id == AlgorithmId::kBandit) bad("algorithm: bandit takes its step from bandit");
    a.rule = parse_step(j["step"], a.horizon_scaled);
  } else if (a.id == AlgorithmId::kFtrlGradients) {
    bad("algorithm: ftrl_gradients needs a fixed step");
  } else {
    a.rule = StepSizeRule::oracle();
  }
  if (a.id == AlgorithmId::kFtrlGradients && a.rule.mode != StepMode::kFixed) {
    bad("algorithm: ftrl_gradients needs a fixed step");
  }
  if (a.id == AlgorithmId::kBandit) a.rule = StepSizeRule::fixed(0.0);
  if (j.contains("map")) {
    if (a.id != AlgorithmId::kGeneralProx) bad("algorithm: map is for general_prox");
    const auto m = j["map"].get<std::string>();
    if (m == "entropy") {
      a.map = MirrorKind::kEntropy;
    } else if (m != "euclidean") {
      bad("algorithm.map: unknown map '" + m + "'");
    }
  }
  if (j.contains("seed") && j.contains("seeds")) bad("algorithm: give seed or seeds");
  if (j.contains("seed")) a.seeds = {count(j["seed"], "algorithm.seed")};
  if (j.contains("seeds")) a.seeds = seed_list(j["seeds"], "algorithm.seeds");
  if (a.seeds.size() > 1 && a.id != AlgorithmId::kBandit) {
    bad("algorithm: several seeds only make sense for bandit runs");
  }
  if (j.contains("bandit")) {
    if (a.id != AlgorithmId::kBandit) bad("algorithm: bandit block on a non-bandit run");
    const json& b = j["bandit"];
    if (b.is_string()) {
      if (b.get<std::string>() != "theorem") bad("algorithm.bandit: expected \"theorem\"");
    } else {
      only_keys(b, {"delta", "eta", "alpha", "stiffness"}, "algorithm.bandit");
      for (const char* k : {"delta", "eta", "alpha"}) {
        if (!b.contains(k)) bad(std::string("algorithm.bandit: missing ") + k);
      }
      a.bandit.theorem = false;
      a.bandit.params.delta = number(b["delta"], "algorithm.bandit.delta");
      a.bandit.params.eta = number(b["eta"], "algorithm.bandit.eta");
      a.bandit.params.alpha = number(b["alpha"], "algorithm.bandit.alpha");
      if (b.contains("stiffness")) {
        a.bandit.params.stiffness_constant =
            number(b["stiffness"], "algorithm.bandit.stiffness");
      }
    }
  }
  if (j.contains("label")) {
    a.label = j["label"].get<std::string>();
    if (a.label.empty() ||
        !std::all_of(a.label.begin(), a.label.end(), [](char c) {
          return std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                 c == '-' || c == '.';
        })) {
      bad("algorithm.label: use letters, digits, '_', '-', '.'");
    }
  } else {
    a.label = to_string(a.id);
    if (a.rule.mode == StepMode::kDoubling) a.label = "adaptive_" + a.label;
    if (a.id == AlgorithmId::kGeneralProx) a.label += "_" + to_string(a.map);
  }
  return a;
}

template <class T, class F>
std::vector<T> range(const json& j, const std::string& where, F convert) {
  if (!j.is_array()) bad(where + ": expected an array");
  if (j.empty()) bad(where + ": empty range");
  std::vector<T> out;
  for (const auto& v : j) out.push_back(convert(v, where));
  return out;
}

SweepSpec parse_sweep(const json& j, const ScenarioSpec& base) {
  only_keys(j, {"T", "d", "variation", "scenario_seed", "seeds"}, "sweep");
  SweepSpec s;
  s.horizons = {base.horizon};
  s.dims = {base.dim};
  s.scenario_seeds = {base.seed};
  if (j.contains("T")) {
    s.horizons = range<std::size_t>(j["T"], "sweep.T", count);
  }
  if (j.contains("d")) {
    if (!base.f.empty()) bad("sweep.d: the scenario fixes d through f");
    s.dims = range<std::size_t>(j["d"], "sweep.d", count);
  }
  if (j.contains("variation")) {
    if (!has_variation(base.family)) {
      bad("sweep.variation: family " + base.family + " has no variation parameter");
    }
    s.variations = range<double>(j["variation"], "sweep.variation", number);
  }
  if (j.contains("scenario_seed")) {
    s.scenario_seeds =
        range<std::uint64_t>(j["scenario_seed"], "sweep.scenario_seed", count);
  }
  if (j.contains("seeds")) s.seeds = seed_list(j["seeds"], "sweep.seeds");
  return s;
}

// ---------------------------------------------------------------- checks

bool check_fits(TheoremId check, const AlgorithmSpec& a) {
  const bool doubling = a.rule.mode == StepMode::kDoubling;
  switch (check) {
    case TheoremId::kEq2:
      return a.id == AlgorithmId::kFtrlLinear;
    case TheoremId::kThm1:
    case TheoremId::kLemma1:
      return a.id == AlgorithmId::kImprovedFtrl && !doubling;
    case TheoremId::kThm2:
      return a.id == AlgorithmId::kProx && !doubling;
    case TheoremId::kThm3:
      return a.id == AlgorithmId::kGeneralProx;
    case TheoremId::kLemma2Step:
      return a.id == AlgorithmId::kProx || a.id == AlgorithmId::kGeneralProx;
    case TheoremId::kThm4:
      return a.id == AlgorithmId::kBandit && a.bandit.theorem &&
             a.seeds.size() >= 100;
  }
  return false;
}

std::string misfit_reason(TheoremId check) {
  switch (check) {
    case TheoremId::kEq2:
      return "needs ftrl_linear";
    case TheoremId::kThm1:
    case TheoremId::kLemma1:
      return "needs improved_ftrl with a fixed or oracle step";
    case TheoremId::kThm2:
      return "needs prox with a fixed or oracle step";
    case TheoremId::kThm3:
      return "needs general_prox";
    case TheoremId::kLemma2Step:
      return "needs prox or general_prox";
    case TheoremId::kThm4:
      return "needs bandit with theorem parameters and at least 100 seeds";
  }
  return "";
}

// ---------------------------------------------------------------- running

void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

StepSizeRule effective_rule(const AlgorithmSpec& a, std::size_t horizon) {
  StepSizeRule r = a.rule;
  if (a.horizon_scaled) r.eta /= std::sqrt(static_cast<double>(horizon));
  return r;
}

MirrorMap mirror(MirrorKind k) {
  return k == MirrorKind::kEntropy ? MirrorMap::entropy() : MirrorMap::euclidean();
}

BanditParameters bandit_params(const Scenario& sc, const AlgorithmSpec& a,
                               double* evar_cost = nullptr) {
  if (!a.bandit.theorem) return a.bandit.params;
  const double e = evar_cost_values(sc).value;
  if (evar_cost) *evar_cost = e;
  return bandit_theorem_parameters(sc.lipschitz_bound(), sc.smoothness_bound(),
                                   sc.set().inner_radius(), sc.dim(),
                                   sc.horizon(), e);
}

// Everything that can be rejected before a run starts.
void validate(const Scenario& sc, const AlgorithmSpec& a) {
  if (a.id == AlgorithmId::kBandit) {
    const double r = sc.set().inner_radius();
    if (!(r > 0.0)) bad("bandit requires a feasible set containing r*B with r > 0");
    if (!a.bandit.theorem) {
      const auto& p = a.bandit.params;
      if (std::fabs(p.alpha - p.delta / r) > 1e-12 * std::max(1.0, p.delta / r)) {
        bad("alpha must equal delta/r");
      }
      if (!(p.delta > 0.0) || !(p.eta > 0.0)) bad("bandit: delta and eta must be positive");
      if (!(p.alpha < 1.0)) bad("bandit: delta/r must be below 1");
    }
  }
  if (a.id == AlgorithmId::kGeneralProx) mirror(a.map).check_compatible(sc.set());
  if (a.rule.mode == StepMode::kOracle &&
      (a.id == AlgorithmId::kImprovedFtrl || a.id == AlgorithmId::kProx ||
       a.id == AlgorithmId::kGeneralProx)) {
    const MirrorMap map = mirror(a.map);
    const Point z0 = a.id == AlgorithmId::kGeneralProx ? map.minimizer(sc.set())
                                                       : Point(sc.dim(), 0.0);
    if (!a_priori_evar(sc, z0, map)) {
      bad("oracle step needs a scenario whose variation is known before the run "
          "(point-independent gradient differences); use a fixed or doubling step");
    }
  }
  if (a.rule.mode == StepMode::kDoubling && a.id != AlgorithmId::kImprovedFtrl &&
      a.id != AlgorithmId::kProx) {
    bad("doubling step is available for improved_ftrl and prox only");
  }
  if (a.id == AlgorithmId::kFtrlLinear) {
    for (const auto& c : sc.costs()) {
      if (c.family() != CostFamily::kLinear) bad("ftrl_linear needs linear costs");
    }
  }
}

struct Tables {
  std::vector<double> cum_regret;
  std::vector<double> evar_partial;
};

Tables tables(const RunTrace& trace) {
  Tables t;
  t.cum_regret = prefix_regret(trace);
  const Scenario& sc = *trace.scenario;
  const MirrorMap map = mirror(trace.map);
  Point now(sc.dim()), before(sc.dim());
  double e = 0.0;
  for (const auto& r : trace.rounds) {
    sc.cost(r.t).gradient_into(r.z_prev, now);
    sc.cost(r.t - 1).gradient_into(r.z_prev, before);
    kernels::sub(now, before, now);
    const double n = map.dual_norm(now);
    e += n * n;
    t.evar_partial.push_back(e);
  }
  return t;
}

std::string csv(const RunTrace& trace, const Tables& t) {
  std::string s = "t,eta,x,z,cost,cum_cost,cum_regret,evar_partial\n";
  double cum = 0.0;
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    cum += r.cost;
    s += std::to_string(r.t);
    s += ',' + num(r.eta) + ',' + joined(r.x) + ',' + joined(r.z) + ',' +
         num(r.cost) + ',' + num(cum) + ',' + num(t.cum_regret[i]) + ',' +
         num(t.evar_partial[i]) + '\n';
  }
  return s;
}

fs::path seeded_name(const std::string& name, std::uint64_t seed) {
  const fs::path p(name);
  return p.stem().string() + "_seed" + std::to_string(seed) +
         p.extension().string();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ResourceError("cannot write " + path.string());
  f << text;
  if (!f) throw ResourceError("error writing " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) bad("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void prepare_out(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    bad("output directory " + out.string() + " is not writable");
  }
  const fs::path probe = out / ".varbound-write-test";
  {
    std::ofstream f(probe);
    if (!f) bad("output directory " + out.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

ordered_json estimate_json(double v, bool exact) {
  ordered_json j;
  j["value"] = v;
  j["exact"] = exact;
  return j;
}

ordered_json check_json(const BoundCheck& c) {
  ordered_json j;
  j["theorem"] = to_string(c.theorem);
  j["lhs"] = c.lhs;
  j["rhs"] = c.rhs;
  j["satisfied"] = c.satisfied;
  j["margin"] = c.margin;
  if (c.worst_round) j["worst_round"] = c.worst_round;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

ordered_json variation_json(const VariationReport& v) {
  ordered_json j;
  if (v.total_var) j["total_var"] = estimate_json(*v.total_var, true);
  j["seq_var"] = estimate_json(v.seq_var.value, v.seq_var.exact);
  j["evar_seq"] = estimate_json(v.evar_seq, true);
  if (v.evar_general) j["evar_general"] = estimate_json(*v.evar_general, true);
  j["evar_cost"] = estimate_json(v.evar_cost.value, v.evar_cost.exact);
  if (v.decomposition) {
    j["var1"] = estimate_json(v.decomposition->var1, true);
    j["var2"] = estimate_json(v.decomposition->var2, true);
    j["realized_total_var"] =
        estimate_json(v.decomposition->realized_total_variation, true);
  }
  return j;
}

ordered_json eta_schedule(const RunTrace& trace) {
  ordered_json out = ordered_json::array();
  double last = std::numeric_limits<double>::quiet_NaN();
  for (const auto& r : trace.rounds) {
    if (!(r.eta == last)) {
      ordered_json seg;
      seg["from_round"] = r.t;
      seg["eta"] = r.eta;
      out.push_back(seg);
      last = r.eta;
    }
  }
  return out;
}

ordered_json scenario_json(const Scenario& sc) {
  ordered_json j;
  j["id"] = sc.id();
  j["T"] = sc.horizon();
  j["d"] = sc.dim();
  j["set"] = sc.set().describe();
  j["smoothness_bound"] = sc.smoothness_bound();
  j["lipschitz_bound"] = sc.lipschitz_bound();
  return j;
}

BoundCheck run_check(TheoremId id, const std::vector<RunTrace>& traces,
                     const AlgorithmSpec& a, std::uint64_t check_seed) {
  const RunTrace& t = traces.front();
  switch (id) {
    case TheoremId::kLemma1:
      return check_lemma1(t);
    case TheoremId::kLemma2Step:
      return check_prox_trace(t, 100, check_seed);
    case TheoremId::kThm4: {
      double e = 0.0;
      bandit_params(*t.scenario, a, &e);
      return check_bandit_theorem(traces, e);
    }
    default:
      return check_theorem_bound(t, id);
  }
}

struct Evaluated {
  ordered_json summary;
  bool checks_ok = true;
  std::vector<std::string> check_lines;
};

// Regret, variation and checks for the traces of one algorithm spec.
Evaluated evaluate(const std::vector<RunTrace>& traces, const AlgorithmSpec& a,
                   const std::vector<TheoremId>& checks) {
  Evaluated ev;
  const RunTrace& first = traces.front();
  const Scenario& sc = *first.scenario;
  ordered_json& j = ev.summary;
  j["label"] = a.label;
  j["algorithm"] = first.algorithm_name();
  j["step_mode"] = to_string(first.step_mode);
  j["eta_schedule"] = eta_schedule(first);
  if (first.adaptive) {
    j["epoch_starts"] = first.epoch_starts;
    j["epoch_guesses"] = first.epoch_guesses;
  }
  if (first.algorithm == AlgorithmId::kBandit) {
    ordered_json b;
    b["delta"] = first.delta;
    b["eta"] = first.rounds.empty() ? 0.0 : first.rounds.front().eta;
    b["alpha"] = first.shrink_alpha;
    b["stiffness_constant"] = first.stiffness_constant;
    b["parameters"] = a.bandit.theorem ? "theorem" : "explicit";
    j["bandit"] = b;
  }

  const OfflineSolution best = offline_best(sc);
  ordered_json reg;
  reg["best_fixed_cost"] = best.value;
  reg["best_point"] = best.point;
  reg["certificate"] = best.certificate;
  if (traces.size() == 1) {
    double cum = 0.0;
    for (const auto& r : first.rounds) cum += r.cost;
    reg["cumulative_cost"] = cum;
    reg["regret"] = cum - best.value;
    reg["negative_regret"] = cum - best.value < -1e-6;
  } else {
    std::vector<double> per_seed;
    ordered_json seeds = ordered_json::array();
    for (const auto& t : traces) {
      double cum = 0.0;
      for (const auto& r : t.rounds) cum += r.cost;
      per_seed.push_back(cum - best.value);
      seeds.push_back(*t.seed);
    }
    const RegretStatistics st = summarize(per_seed);
    reg["mean"] = st.mean;
    reg["stderr"] = st.standard_error;
    reg["runs"] = st.count;
    reg["seeds"] = seeds;
    reg["per_seed"] = per_seed;
  }
  if (first.algorithm == AlgorithmId::kBandit) {
    reg["loss"] = "smoothed";
    reg["comparator"] = "full feasible set";
  }
  j["regret"] = reg;
  j["variation"] = variation_json(variation_report(first));

  ordered_json cj = ordered_json::array();
  std::uint64_t check_seed = 0xabcdefULL;
  for (TheoremId id : checks) {
    if (!check_fits(id, a)) continue;
    const BoundCheck c = run_check(id, traces, a, check_seed++);
    cj.push_back(check_json(c));
    ev.checks_ok = ev.checks_ok && c.satisfied;
    std::ostringstream line;
    line.precision(17);
    line << a.label << " " << to_string(id) << ": "
         << (c.satisfied ? "PASS" : "FAIL") << " lhs=" << c.lhs
         << " rhs=" << c.rhs;
    ev.check_lines.push_back(line.str());
  }
  j["checks"] = cj;
  return ev;
}

std::vector<std::string> write_traces(const std::vector<RunTrace>& traces,
                                      const fs::path& out,
                                      const std::string& name, int jobs) {
  std::vector<std::string> texts(traces.size());
  parallel_for(traces.size(), jobs,
               [&](std::size_t i) { texts[i] = csv(traces[i], tables(traces[i])); });
  std::vector<std::string> names;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const fs::path file =
        traces.size() == 1 ? fs::path(name) : seeded_name(name, *traces[i].seed);
    write_file(out / file, texts[i]);
    names.push_back(file.string());
  }
  return names;
}

ordered_json header(const char* command, const ExperimentConfig& cfg) {
  ordered_json j;
  j["tool"] = "varbound";
  j["version"] = library_version();
  j["command"] = command;
  j["kernels"] = std::string(kernels::backend_name(kernels::active().backend));
  j["config"] = cfg.echo;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

ExperimentConfig load(const Options& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) {
    cfg.scenario.seed = *o.seed;
    cfg.echo["scenario"]["seed"] = *o.seed;
  }
  return cfg;
}

void require_checks_fit(const ExperimentConfig& cfg, bool every_algorithm) {
  for (TheoremId id : cfg.checks) {
    const auto fits = [&](const AlgorithmSpec& a) { return check_fits(id, a); };
    const bool ok = every_algorithm
                        ? std::all_of(cfg.algorithms.begin(), cfg.algorithms.end(), fits)
                        : std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(), fits);
    if (!ok) bad("check " + to_string(id) + " " + misfit_reason(id));
  }
}

std::string trace_file_for(const ExperimentConfig& cfg, const AlgorithmSpec& a) {
  if (cfg.algorithms.size() == 1) return cfg.trace_name;
  const fs::path p(cfg.trace_name);
  return p.stem().string() + "_" + a.label + p.extension().string();
}

}  // namespace

const char* library_version() { return VARBOUND_VERSION; }

ExperimentConfig parse_config(const json& doc) {
  only_keys(doc, {"scenario", "algorithm", "algorithms", "checks", "outputs", "sweep"},
            "config");
  ExperimentConfig cfg;
  cfg.echo = doc;
  if (!doc.contains("scenario")) bad("config: missing scenario");
  cfg.scenario = parse_scenario(doc["scenario"]);
  if (cfg.scenario.horizon < 1) bad("scenario.T must be >= 1");
  if (cfg.scenario.dim < 1) bad("scenario.d must be >= 1");
  if (doc.contains("algorithm") == doc.contains("algorithms")) {
    bad("config: give exactly one of algorithm or algorithms");
  }
  if (doc.contains("algorithm")) {
    cfg.algorithms.push_back(parse_algorithm(doc["algorithm"]));
  } else {
    const json& list = doc["algorithms"];
    if (!list.is_array() || list.empty()) bad("config: algorithms must be a non-empty array");
    for (const auto& a : list) cfg.algorithms.push_back(parse_algorithm(a));
  }
  for (std::size_t i = 0; i < cfg.algorithms.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (cfg.algorithms[i].label == cfg.algorithms[k].label) {
        bad("config: duplicate algorithm label '" + cfg.algorithms[i].label +
            "'; set label");
      }
    }
  }
  if (doc.contains("checks")) {
    if (!doc["checks"].is_array()) bad("config: checks must be an array");
    for (const auto& c : doc["checks"]) {
      cfg.checks.push_back(theorem_from_string(c.get<std::string>()));
    }
  }
  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    only_keys(o, {"trace", "summary"}, "outputs");
    if (o.contains("trace")) cfg.trace_name = o["trace"].get<std::string>();
    if (o.contains("summary")) cfg.summary_name = o["summary"].get<std::string>();
    for (const auto* n : {&cfg.trace_name, &cfg.summary_name}) {
      if (n->empty() || fs::path(*n).has_parent_path()) {
        bad("outputs: file names must be plain names inside --out");
      }
    }
  }
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc["sweep"], cfg.scenario);
  return cfg;
}

ExperimentConfig load_config(const fs::path& path) {
  const std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad("config " + path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const json::exception& e) {
    bad("config " + path.string() + ": " + e.what());
  }
}

ScenarioPtr build_scenario(const ScenarioSpec& s) {
  ScenarioPtr base;
  const auto& f = s.family;
  if (f == "identical_quadratic") {
    base = scenarios::identical_quadratic(s.dim, s.horizon, s.seed, s.center_radius,
                                          s.curvature);
  } else if (f == "identical_linear") {
    base = scenarios::identical(CostFunction::linear(s.f), s.horizon,
                                FeasibleSet::unit_ball(s.dim));
  } else if (f == "smooth_plus_drift") {
    base = scenarios::smooth_plus_drift(s.dim, s.horizon, s.seed,
                                        s.variation.value_or(0.05));
  } else if (f == "random_linear") {
    base = scenarios::random_linear(s.dim, s.horizon, s.seed, s.mean_radius,
                                    s.variation.value_or(0.5));
  } else if (f == "switching_halves") {
    base = scenarios::switching_halves(s.f, s.g, s.horizon);
  } else if (f == "random_quadratics") {
    base = scenarios::random_quadratics(s.dim, s.horizon, s.seed);
  } else {
    bad("unknown scenario family '" + f + "'");
  }
  if (!s.set && s.smoothness_bound == 0.0 && s.lipschitz_bound == 0.0) return base;
  FeasibleSet set = base->set();
  if (s.set) {
    const SetSpec& k = *s.set;
    if (k.kind == "unit_ball") {
      set = FeasibleSet::unit_ball(s.dim);
    } else if (k.kind == "ball") {
      set = FeasibleSet::ball(s.dim, k.radius);
    } else if (k.kind == "box") {
      if (k.lo.size() != s.dim) bad("scenario.set: box dimension differs from d");
      set = FeasibleSet::box(k.lo, k.hi);
    } else {
      set = FeasibleSet::simplex(s.dim);
    }
  }
  return std::make_shared<const Scenario>(base->id(), base->costs(), set,
                                          s.smoothness_bound, s.lipschitz_bound);
}

std::vector<RunTrace> execute(const ScenarioPtr& sc, const AlgorithmSpec& a,
                              int jobs) {
  const StepSizeRule rule = effective_rule(a, sc->horizon());
  switch (a.id) {
    case AlgorithmId::kFtrlLinear:
      return {run_ftrl_linear(sc, rule)};
    case AlgorithmId::kFtrlGradients:
      return {run_ftrl_on_gradients(sc, rule.eta)};
    case AlgorithmId::kImprovedFtrl:
      return {run_improved_ftrl(sc, rule)};
    case AlgorithmId::kProx:
      return {run_prox(sc, rule)};
    case AlgorithmId::kGeneralProx:
      return {run_general_prox(sc, mirror(a.map), rule)};
    case AlgorithmId::kBandit: {
      const BanditParameters p = bandit_params(*sc, a);
      std::vector<RunTrace> out(a.seeds.size());
      parallel_for(a.seeds.size(), jobs,
                   [&](std::size_t i) { out[i] = run_bandit(sc, p, a.seeds[i]); });
      return out;
    }
  }
  bad("unknown algorithm");
}

std::string trace_csv(const RunTrace& trace) { return csv(trace, tables(trace)); }

RunTrace read_trace_csv(const std::string& text, ScenarioPtr scenario,
                        const AlgorithmSpec& a) {
  const Scenario& sc = *scenario;
  const std::size_t d = sc.dim();
  RunTrace trace;
  trace.scenario = scenario;
  trace.algorithm = a.id;
  trace.step_mode = a.rule.mode;
  trace.map = a.map;
  trace.adaptive = a.rule.mode == StepMode::kDoubling;
  const MirrorMap map = mirror(a.map);
  trace.z0 = a.id == AlgorithmId::kGeneralProx ? map.minimizer(sc.set())
                                               : Point(d, 0.0);
  if (trace.adaptive) trace.epoch_starts.clear();

  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) ||
      line != "t,eta,x,z,cost,cum_cost,cum_regret,evar_partial") {
    bad("trace: unexpected header");
  }
  auto parse_double = [](std::string_view s) {
    double v = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      bad("trace: bad number '" + std::string(s) + "'");
    }
    return v;
  };
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
      if (i == s.size() || s[i] == sep) {
        parts.push_back(s.substr(start, i - start));
        start = i + 1;
      }
    }
    return parts;
  };
  auto point = [&](std::string_view s) {
    Point p;
    for (auto part : split(s, ';')) p.push_back(parse_double(part));
    if (p.size() != d) bad("trace: point has the wrong dimension");
    return p;
  };

  Point prev_z = trace.z0;
  double prev_eta = std::numeric_limits<double>::quiet_NaN();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 8) bad("trace: expected 8 columns");
    RoundRecord r;
    r.t = static_cast<std::size_t>(parse_double(cols[0]));
    if (r.t != trace.rounds.size() + 1) bad("trace: rounds out of order");
    r.eta = parse_double(cols[1]);
    r.x = point(cols[2]);
    r.z = point(cols[3]);
    r.cost = parse_double(cols[4]);
    r.raw_cost = r.cost;
    const bool epoch_start = trace.adaptive && !(r.eta == prev_eta);
    if (epoch_start) {
      trace.epoch_starts.push_back(r.t);
      prev_z = Point(d, 0.0);
    }
    if (a.id == AlgorithmId::kFtrlLinear || a.id == AlgorithmId::kFtrlGradients) {
      r.z_prev = r.x;
    } else {
      r.z_prev = prev_z;
    }
    if (a.id != AlgorithmId::kBandit) {
      const double v = sc.cost(r.t).value(r.x);
      if (std::fabs(v - r.cost) > 1e-9 * std::max(1.0, std::fabs(v))) {
        bad("trace does not match the configured scenario at t=" +
            std::to_string(r.t));
      }
    }
    prev_z = r.z;
    prev_eta = r.eta;
    trace.rounds.push_back(std::move(r));
  }
  if (trace.rounds.size() != sc.horizon()) {
    bad("trace has " + std::to_string(trace.rounds.size()) +
        " rounds, scenario has " + std::to_string(sc.horizon()));
  }
  if (a.id == AlgorithmId::kBandit) {
    const BanditParameters p = bandit_params(sc, a);
    trace.delta = p.delta;
    trace.shrink_alpha = p.alpha;
    trace.stiffness_constant = p.stiffness_constant.value_or(sc.lipschitz_bound());
  }
  return trace;
}

int cmd_run(const Options& o, std::ostream& log) {
  const ExperimentConfig cfg = load(o);
  if (cfg.algorithms.size() != 1) bad("run takes one algorithm; use compare");
  if (cfg.sweep) bad("run: config has a sweep block; use sweep");
  require_checks_fit(cfg, true);
  const AlgorithmSpec& a = cfg.algorithms.front();
  const ScenarioPtr sc = build_scenario(cfg.scenario);
  validate(*sc, a);
  prepare_out(o.out);

  const std::vector<RunTrace> traces = execute(sc, a, o.jobs);
  Evaluated ev = evaluate(traces, a, cfg.checks);
  ev.summary["traces"] = write_traces(traces, o.out, cfg.trace_name, o.jobs);

  ordered_json doc = header("run", cfg);
  doc["scenario"] = scenario_json(*sc);
  doc["runs"] = ordered_json::array({ev.summary});
  doc["all_checks_passed"] = ev.checks_ok;
  write_file(o.out / cfg.summary_name, dump(doc));
  for (const auto& l : ev.check_lines) log << l << "\n";
  log << "wrote " << (o.out / cfg.summary_name).string() << "\n";
  return ev.checks_ok ? kExitOk : kExitCheckFailed;
}

int cmd_compare(const Options& o, std::ostream& log) {
  const ExperimentConfig cfg = load(o);
  if (cfg.algorithms.size() == 1) return cmd_run(o, log);
  if (cfg.sweep) bad("compare: config has a sweep block; use sweep");
  require_checks_fit(cfg, false);
  const ScenarioPtr sc = build_scenario(cfg.scenario);
  for (const auto& a : cfg.algorithms) validate(*sc, a);
  prepare_out(o.out);

  ordered_json runs = ordered_json::array();
  bool ok = true;
  std::vector<std::vector<double>> regret_columns;
  for (const auto& a : cfg.algorithms) {
    const std::vector<RunTrace> traces = execute(sc, a, o.jobs);
    Evaluated ev = evaluate(traces, a, cfg.checks);
    ev.summary["traces"] =
        write_traces(traces, o.out, trace_file_for(cfg, a), o.jobs);
    regret_columns.push_back(prefix_regret(traces.front()));
    ok = ok && ev.checks_ok;
    runs.push_back(ev.summary);
    for (const auto& l : ev.check_lines) log << l << "\n";
  }
  std::string table = "t";
  for (const auto& a : cfg.algorithms) table += "," + a.label;
  table += '\n';
  for (std::size_t t = 0; t < sc->horizon(); ++t) {
    table += std::to_string(t + 1);
    for (const auto& col : regret_columns) table += "," + num(col[t]);
    table += '\n';
  }
  write_file(o.out / "compare.csv", table);

  ordered_json doc = header("compare", cfg);
  doc["scenario"] = scenario_json(*sc);
  doc["runs"] = runs;
  doc["table"] = "compare.csv";
  doc["all_checks_passed"] = ok;
  write_file(o.out / cfg.summary_name, dump(doc));
  log << "wrote " << (o.out / "compare.csv").string() << "\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_sweep(const Options& o, std::ostream& log) {
  const ExperimentConfig cfg = load(o);
  if (!cfg.sweep) bad("sweep: config has no sweep block");
  require_checks_fit(cfg, false);
  const SweepSpec& sw = *cfg.sweep;

  struct Task {
    ScenarioSpec scenario;
    AlgorithmSpec algorithm;
  };
  std::vector<Task> tasks;
  const std::vector<std::optional<double>> variations =
      sw.variations.empty()
          ? std::vector<std::optional<double>>{cfg.scenario.variation}
          : std::vector<std::optional<double>>(sw.variations.begin(),
                                               sw.variations.end());
  for (std::size_t horizon : sw.horizons) {
    for (std::size_t dim : sw.dims) {
      for (const auto& var : variations) {
        for (std::uint64_t seed : sw.scenario_seeds) {
          for (const auto& a : cfg.algorithms) {
            Task t{cfg.scenario, a};
            t.scenario.horizon = horizon;
            t.scenario.dim = dim;
            t.scenario.variation = var;
            t.scenario.seed = seed;
            // Deterministic learners ignore the seed list.
            if (sw.seeds && a.id == AlgorithmId::kBandit) {
              t.algorithm.seeds = *sw.seeds;
            }
            if (horizon < 1 || dim < 1) bad("sweep: T and d must be >= 1");
            if (cfg.scenario.set && cfg.scenario.set->kind == "box" &&
                cfg.scenario.set->lo.size() != dim) {
              bad("sweep: box set dimension differs from swept d");
            }
            tasks.push_back(std::move(t));
          }
        }
      }
    }
  }
  // Validate everything before the first run.
  for (const auto& t : tasks) {
    validate(*build_scenario(t.scenario), t.algorithm);
  }
  prepare_out(o.out);

  struct Row {
    RegretStatistics stats;
    ordered_json checks = ordered_json::array();
    bool ok = true;
    double evar_seq = 0.0;
  };
  std::vector<Row> rows(tasks.size());
  parallel_for(tasks.size(), o.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    const ScenarioPtr sc = build_scenario(t.scenario);
    const std::vector<RunTrace> traces = execute(sc, t.algorithm, 1);
    const OfflineSolution best = offline_best(*sc);
    std::vector<double> regrets;
    for (const auto& tr : traces) {
      double cum = 0.0;
      for (const auto& r : tr.rounds) cum += r.cost;
      regrets.push_back(cum - best.value);
    }
    Row& row = rows[i];
    row.stats = summarize(regrets);
    row.evar_seq = evar_sequential(traces.front());
    std::uint64_t check_seed = 0xabcdefULL;
    for (TheoremId id : cfg.checks) {
      if (!check_fits(id, t.algorithm)) continue;
      const BoundCheck c = run_check(id, traces, t.algorithm, check_seed++);
      row.checks.push_back(check_json(c));
      row.ok = row.ok && c.satisfied;
    }
  });

  std::string table =
      "T,d,variation,scenario_seed,algorithm,runs,regret_mean,regret_stderr,"
      "evar_seq,checks_passed\n";
  ordered_json results = ordered_json::array();
  bool ok = true;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    const Row& r = rows[i];
    ok = ok && r.ok;
    const std::string var = t.scenario.variation ? num(*t.scenario.variation) : "";
    table += std::to_string(t.scenario.horizon) + "," +
             std::to_string(t.scenario.dim) + "," + var + "," +
             std::to_string(t.scenario.seed) + "," + t.algorithm.label + "," +
             std::to_string(r.stats.count) + "," + num(r.stats.mean) + "," +
             num(r.stats.standard_error) + "," + num(r.evar_seq) + "," +
             (r.ok ? "true" : "false") + "\n";
    ordered_json j;
    j["T"] = t.scenario.horizon;
    j["d"] = t.scenario.dim;
    if (t.scenario.variation) j["variation"] = *t.scenario.variation;
    j["scenario_seed"] = t.scenario.seed;
    j["algorithm"] = t.algorithm.label;
    j["runs"] = r.stats.count;
    j["regret_mean"] = r.stats.mean;
    j["regret_stderr"] = r.stats.standard_error;
    j["evar_seq"] = estimate_json(r.evar_seq, true);
    j["checks"] = r.checks;
    results.push_back(j);
  }
  write_file(o.out / "sweep.csv", table);
  ordered_json doc = header("sweep", cfg);
  doc["results"] = results;
  doc["table"] = "sweep.csv";
  doc["all_checks_passed"] = ok;
  write_file(o.out / cfg.summary_name, dump(doc));
  log << "wrote " << (o.out / "sweep.csv").string() << " (" << tasks.size()
      << " runs)\n";
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_check(const Options& o, std::ostream& log) {
  ExperimentConfig cfg = load(o);
  if (cfg.sweep) bad("check: sweep configs store no traces");
  if (o.trace && cfg.algorithms.size() != 1) {
    bad("check: --trace needs a single-algorithm config");
  }
  const ScenarioPtr sc = build_scenario(cfg.scenario);
  std::vector<TheoremId> checks = cfg.checks;
  if (checks.empty()) {
    // Checks that hold for any step size.
    checks = {TheoremId::kLemma1, TheoremId::kLemma2Step};
  } else {
    require_checks_fit(cfg, cfg.algorithms.size() == 1);
  }

  ordered_json doc = header("check", cfg);
  doc["scenario"] = scenario_json(*sc);
  ordered_json results = ordered_json::array();
  bool ok = true;
  for (const auto& a : cfg.algorithms) {
    std::vector<RunTrace> traces;
    const std::string base = trace_file_for(cfg, a);
    if (a.seeds.size() == 1 || a.id != AlgorithmId::kBandit) {
      const fs::path p = o.trace ? *o.trace : o.out / base;
      traces.push_back(read_trace_csv(read_file(p), sc, a));
      if (a.id == AlgorithmId::kBandit) traces.back().seed = a.seeds.front();
    } else {
      for (std::uint64_t s : a.seeds) {
        traces.push_back(
            read_trace_csv(read_file(o.out / seeded_name(base, s)), sc, a));
        traces.back().seed = s;
      }
    }
    std::uint64_t check_seed = 0xabcdefULL;
    for (TheoremId id : checks) {
      if (!check_fits(id, a)) continue;
      const BoundCheck c = run_check(id, traces, a, check_seed++);
      ordered_json j = check_json(c);
      j["label"] = a.label;
      results.push_back(j);
      ok = ok && c.satisfied;
      std::ostringstream line;
      line.precision(17);
      line << a.label << " " << to_string(id) << ": "
           << (c.satisfied ? "PASS" : "FAIL") << " lhs=" << c.lhs
           << " rhs=" << c.rhs;
      log << line.str() << "\n";
    }
  }
  doc["checks"] = results;
  doc["all_checks_passed"] = ok;
  prepare_out(o.out);
  write_file(o.out / "check.json", dump(doc));
  return ok ? kExitOk : kExitCheckFailed;
}

int main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"varbound: online learning regret experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());
  Options o;
  std::string config, outdir = ".", trace;
  std::uint64_t seed = 0;
  const std::vector<std::pair<const char*, const char*>> verbs = {
      {"run", "run one algorithm on one scenario"},
      {"compare", "run several algorithms on one scenario"},
      {"sweep", "cartesian sweep over T, d, variation and seeds"},
      {"check", "re-run the checkers on stored traces"}};
  std::vector<CLI::App*> subs;
  std::vector<CLI::Option*> seed_opts;
  CLI::Option* trace_opt = nullptr;
  for (const auto& [name, help] : verbs) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--out", outdir, "output directory")->capture_default_str();
    seed_opts.push_back(
        sub->add_option("--seed", seed, "override the scenario seed"));
    sub->add_option("--jobs", o.jobs, "worker threads")
        ->check(CLI::Range(1, 1024))
        ->capture_default_str();
    if (std::string(name) == "check") {
      trace_opt = sub->add_option("--trace", trace, "trace CSV to check");
    }
    subs.push_back(sub);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }
  o.config = config;
  o.out = outdir;
  for (auto* s : seed_opts) {
    if (s->count()) o.seed = seed;
  }
  if (trace_opt && trace_opt->count()) o.trace = trace;

  try {
    if (subs[0]->parsed()) return cmd_run(o, out);
    if (subs[1]->parsed()) return cmd_compare(o, out);
    if (subs[2]->parsed()) return cmd_sweep(o, out);
    return cmd_check(o, out);
  } catch (const ConfigurationError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const ContractViolation& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}

}  // namespace varbound::cli
