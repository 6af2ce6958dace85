#include "core/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "core/coupling.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/fluid.hpp"
#include "core/generators.hpp"
#include "core/rng.hpp"
#include "core/simulation.hpp"

namespace graphlb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double x) { return format_number(x); }

std::string hex(std::uint64_t x) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t job_seed(const ExperimentSpec& spec, std::uint64_t index) {
  return derive_seed(spec.seed, static_cast<std::uint64_t>(Stream::kExperiment), index);
}

std::uint64_t graph_seed(const ExperimentSpec& spec, std::uint64_t index) {
  return derive_seed(spec.seed, static_cast<std::uint64_t>(Stream::kGraph), index);
}

std::size_t as_size(std::uint64_t v) { return static_cast<std::size_t>(v); }

// (x - y) measured in combined standard errors.
double separation(double x, double sx, double y, double sy) {
  const double se = std::sqrt(sx * sx + sy * sy);
  if (se > 0.0) return (x - y) / se;
  if (x == y) return 0.0;
  return x > y ? kInf : -kInf;
}

struct Estimate {
  double mean = 0.0;
  double se = 0.0;
};

// Replications are independent: mean of means, SE from the per-run SEs.
Estimate combine(const std::vector<Estimate>& runs) {
  Estimate e;
  if (runs.empty()) return e;
  double var = 0.0;
  for (const auto& r : runs) {
    e.mean += r.mean;
    var += r.se * r.se;
  }
  e.mean /= static_cast<double>(runs.size());
  e.se = std::sqrt(var) / static_cast<double>(runs.size());
  return e;
}

double rule_degree(const std::string& rule, std::size_t n) {
  const double dn = static_cast<double>(n);
  if (rule == "log") return std::log(dn);
  if (rule == "sqrt") return std::sqrt(dn);
  if (rule == "sqrt_log") return std::ceil(std::sqrt(dn) * std::log(dn));
  const double c = parse_double(rule, "degree rule");
  require(c > 0.0, "degree rule must be positive");
  return c;
}

void validate_rule(const std::string& rule) {
  if (rule == "clique" || rule == "log" || rule == "sqrt" || rule == "sqrt_log") return;
  (void)rule_degree(rule, 2);
}

// Erdos-Renyi with edge probability c(N)/N, or the clique.
Graph rule_graph(const std::string& rule, std::size_t n, std::uint64_t seed) {
  if (rule == "clique") return gen_clique(n);
  const double p = std::min(1.0, rule_degree(rule, n) / static_cast<double>(n));
  return gen_erdos_renyi(n, p, seed);
}

struct SteadyRun {
  Estimate wait;
  std::vector<Estimate> tails;   // tails[m-1] = sum_{i>=m} q_i
  std::vector<Estimate> q;       // q[i-1]
  double mean_degree = 0.0;
  Estimate fcfs;
};

SteadyRun steady_run(const Graph& g, double lambda, double horizon, double warmup, double grid,
                     std::uint64_t seed, std::size_t tail_levels, bool waits = false) {
  SimConfig cfg;
  cfg.lambda = lambda;
  cfg.horizon = horizon;
  cfg.grid = grid;
  cfg.seed = seed;
  cfg.record_waits = waits;
  const StationarySummary s = stationary_stats(simulate(g, cfg), warmup);
  SteadyRun r;
  r.wait = {s.wait_little, s.wait_little_se};
  for (std::size_t m = 1; m <= tail_levels; ++m) r.tails.push_back({s.tail_mean(m), s.tail_se(m)});
  for (std::size_t i = 0; i < s.mean_q.size(); ++i) r.q.push_back({s.mean_q[i], s.se_q[i]});
  r.mean_degree = g.mean_degree();
  if (s.has_fcfs) r.fcfs = {s.wait_fcfs, s.wait_fcfs_se};
  return r;
}

Estimate combine_field(const std::vector<SteadyRun>& runs, const std::function<Estimate(const SteadyRun&)>& f) {
  std::vector<Estimate> xs;
  for (const auto& r : runs) xs.push_back(f(r));
  return combine(xs);
}

// Linear interpolation on a sampled path.
double interpolate(const std::vector<double>& times, const std::function<double(std::size_t)>& value,
                   double t) {
  if (t <= times.front()) return value(0);
  if (t >= times.back()) return value(times.size() - 1);
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  const std::size_t lo = hi - 1;
  const double w = (t - times[lo]) / (times[hi] - times[lo]);
  return value(lo) * (1.0 - w) + value(hi) * w;
}

struct Regression {
  double slope = 0.0;
  double t_stat = 0.0;
  std::size_t points = 0;
};

Regression ols(const std::vector<double>& x, const std::vector<double>& y) {
  Regression r;
  r.points = x.size();
  if (x.size() < 3) return r;
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) return r;
  r.slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - my - r.slope * (x[i] - mx);
    sse += e * e;
  }
  const double se = std::sqrt(sse / (n - 2.0) / sxx);
  r.t_stat = se > 0.0 ? r.slope / se : (r.slope < 0 ? -kInf : kInf);
  return r;
}

void common_notes(ExperimentResult& res, const ExperimentSpec& spec) {
  res.note("version", GRAPHLB_VERSION);
  res.note("seed", std::to_string(spec.seed));
  res.note("replications", std::to_string(spec.replications));
  for (const auto& [k, v] : spec.params.values()) res.note("param." + k, v);
}

ExperimentResult start(const ExperimentSpec& spec) {
  ExperimentResult res;
  res.name = spec.name;
  res.kind = spec.kind;
  common_notes(res, spec);
  return res;
}

std::string table_name(const ExperimentSpec& spec, const std::string& suffix) {
  return suffix.empty() ? spec.name + ".csv" : spec.name + "_" + suffix + ".csv";
}

// Kind -> (accepted keys, check names, default replications).
struct KindInfo {
  std::vector<std::string> keys;
  std::vector<std::string> checks;
  std::size_t replications = 1;
  std::function<ExperimentResult(const ExperimentSpec&)> run;
};

const std::map<std::string, KindInfo>& kinds() {
  static const std::map<std::string, KindInfo> table = {
      {"mm1_oracle",
       {{"n", "lambda", "horizon", "warmup", "grid", "levels", "band"},
        {"q1_oracle", "q2_oracle", "q3_oracle", "q4_oracle", "fcfs_wait_oracle"},
        1,
        run_mm1_oracle}},
      {"fig_fluid",
       {{"n", "p", "lambda", "horizon", "grid", "dt", "tolerance", "clique_margin"},
        {"errg_gap", "clique_gap", "clique_vs_errg"},
        3,
        run_fig_fluid}},
      {"fig_diffusion",
       {{"n", "lambda_total", "p", "horizon", "grid", "initial", "band", "qbar3_ceiling",
         "t_stat"},
        {"qbar1_band", "qbar2_band", "qbar3_small", "qbar2_mean_reversion"},
        24,
        run_fig_diffusion}},
      {"fig_steady_sweep",
       {{"lambda", "n_grid", "rules", "horizon", "warmup", "grid", "halving", "const_floor",
         "clique_ceiling", "band"},
        {"sqrt_decreasing", "sqrt_halving", "const2_bounded", "clique_vanishing"},
        1,
        run_fig_steady_sweep}},
      {"fig_topology_compare",
       {{"n", "width", "height", "lambda", "horizon", "warmup", "grid", "band"},
        {"ring_below_errg", "ring_below_rgg", "rgg_worst_degree2", "rgg_worst_degree4",
         "all_positive"},
        1,
        run_fig_topology_compare}},
      {"fig_load_effect",
       {{"lambdas", "n_grid", "rule", "horizon", "warmup", "grid", "factor", "floor", "band"},
        {"monotone_in_lambda", "fast_low_load", "slower_high_load"},
        1,
        run_fig_load_effect}},
      {"counterexamples",
       {{"ring_n", "ring_lambda", "ring_floor", "horizon", "warmup", "grid", "bip_n", "bip_c",
         "bip_lambda", "bip_horizon", "bip_grid", "q2_level", "fluid_dt", "fluid_tolerance",
         "stop_window", "sub_lambda", "sub_ceiling"},
        {"ring_tail2", "bipartite_q2_crossing", "bipartite_fluid_match",
         "bipartite_saturation_time", "subcritical_q2"},
        1,
        run_counterexamples}},
      {"coupling_audit",
       {{"n_grid", "rules", "lambda", "horizon", "grid", "tie_rule", "decreasing_rule",
         "persistent_rule", "persistent_floor"},
        {"bound_residual", "sqrt_log_decreasing", "const2_persistent"},
        5,
        run_coupling_audit}},
      {"ordering",
       {{"n", "width", "height", "lambda", "horizon", "warmup", "grid", "levels", "band"},
        {"tail_vs_isolated", "clique_wait_minimal"},
        1,
        run_ordering}},
  };
  return table;
}

const KindInfo& kind_info(const std::string& kind) {
  auto it = kinds().find(kind);
  if (it == kinds().end()) fail(ErrorCode::kInvalidArgument, "unknown experiment kind '" + kind + "'");
  return it->second;
}

ExperimentResult finish(ExperimentResult res, const ExperimentSpec& spec) {
  if (spec.checks.empty()) return res;
  std::vector<Check> kept;
  for (auto& c : res.checks)
    if (std::find(spec.checks.begin(), spec.checks.end(), c.name) != spec.checks.end())
      kept.push_back(c);
  res.checks = std::move(kept);
  return res;
}

}  // namespace

Check make_check(std::string name, double measured, std::string relation, double tolerance) {
  Check c{std::move(name), measured, std::move(relation), tolerance, false};
  if (c.relation == "<=") c.pass = measured <= tolerance;
  else if (c.relation == "<") c.pass = measured < tolerance;
  else if (c.relation == ">=") c.pass = measured >= tolerance;
  else if (c.relation == ">") c.pass = measured > tolerance;
  else fail(ErrorCode::kInternal, "bad relation " + c.relation);
  return c;
}

bool ExperimentResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : kinds()) v.push_back(k);
    return v;
  }();
  return names;
}

const std::vector<std::string>& check_names(const std::string& kind) {
  return kind_info(kind).checks;
}

bool is_experiment_kind(const std::string& kind) { return kinds().count(kind) != 0; }

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

// ---------------------------------------------------------------------------

ExperimentResult run_mm1_oracle(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t n = as_size(p.get_u64("n", 100));
  const double lambda = p.get_double("lambda", 0.5);
  const double horizon = p.get_double("horizon", 2000.0);
  const double warmup = p.get_double("warmup", 500.0);
  const double grid = p.get_double("grid", 0.5);
  const std::size_t levels = as_size(p.get_u64("levels", 4));
  const double band = p.get_double("band", 3.0);
  const Graph g = gen_isolated(n);

  const auto runs = parallel_map<SteadyRun>(spec.replications, spec.threads, [&](std::size_t r) {
    return steady_run(g, lambda, horizon, warmup, grid, job_seed(spec, r), 1, true);
  });

  std::string csv = "level,mean,se,oracle\n";
  for (std::size_t i = 1; i <= levels; ++i) {
    const Estimate e = combine_field(runs, [&](const SteadyRun& r) {
      return i <= r.q.size() ? r.q[i - 1] : Estimate{};
    });
    const double oracle = std::pow(lambda, static_cast<double>(i));
    csv += std::to_string(i) + "," + num(e.mean) + "," + num(e.se) + "," + num(oracle) + "\n";
    if (i <= 4)
      res.checks.push_back(make_check("q" + std::to_string(i) + "_oracle",
                                      std::abs(separation(e.mean, e.se, oracle, 0.0)), "<=", band));
  }
  const Estimate w = combine_field(runs, [](const SteadyRun& r) { return r.fcfs; });
  const double w_oracle = lambda / (1.0 - lambda);
  csv += "wait," + num(w.mean) + "," + num(w.se) + "," + num(w_oracle) + "\n";
  res.checks.push_back(
      make_check("fcfs_wait_oracle", std::abs(separation(w.mean, w.se, w_oracle, 0.0)), "<=", band));
  res.tables.push_back({table_name(spec, ""), csv});
  return res;
}

ExperimentResult run_fig_fluid(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t n = as_size(p.get_u64("n", 10000));
  const double edge_p = p.get_double("p", 0.01);
  const double lambda = p.get_double("lambda", 0.8);
  const double horizon = p.get_double("horizon", 10.0);
  const double grid = p.get_double("grid", 0.05);
  const double dt = p.get_double("dt", 1e-3);
  const double tol = p.get_double("tolerance", 0.02);
  const double margin = p.get_double("clique_margin", 0.01);
  const std::size_t reps = spec.replications;
  constexpr std::size_t kLevels = 2;

  const Graph errg = gen_erdos_renyi(n, edge_p, graph_seed(spec, 0));
  const Graph clique = gen_clique(n);
  res.note("graph.errg", errg.label() + " fingerprint " + hex(errg.fingerprint()));
  res.note("graph.clique", clique.label());

  // Jobs 0..reps-1 on the random graph, reps..2reps-1 on the clique.
  const auto traces = parallel_map<Trace>(2 * reps, spec.threads, [&](std::size_t j) {
    SimConfig cfg;
    cfg.lambda = lambda;
    cfg.horizon = horizon;
    cfg.grid = grid;
    cfg.seed = job_seed(spec, j);
    return simulate(j < reps ? errg : clique, cfg);
  });

  FluidVector q0(default_fluid_levels(lambda), 0.0);
  const FluidTrajectory fl = fluid_integrate(q0, lambda, horizon, dt, grid);
  auto fluid_at = [&](double t, std::size_t level) {
    return interpolate(fl.times, [&](std::size_t s) { return fl.states[s][level - 1]; }, t);
  };

  const std::vector<double>& times = traces.front().times;
  auto average = [&](std::size_t first, std::size_t s, std::size_t level) {
    double sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) sum += traces[first + r].q(s, level);
    return sum / static_cast<double>(reps);
  };
  auto sup_gap = [&](const std::function<double(std::size_t, std::size_t)>& path) {
    double gap = 0.0;
    for (std::size_t s = 0; s < times.size(); ++s)
      for (std::size_t i = 1; i <= kLevels; ++i)
        gap = std::max(gap, std::abs(path(s, i) - fluid_at(times[s], i)));
    return gap;
  };

  const double errg_gap = sup_gap([&](std::size_t s, std::size_t i) { return average(0, s, i); });
  const double clique_gap =
      sup_gap([&](std::size_t s, std::size_t i) { return average(reps, s, i); });

  std::string gaps = "graph,replication,sup_gap\n";
  for (std::size_t j = 0; j < 2 * reps; ++j) {
    const double g = sup_gap([&](std::size_t s, std::size_t i) { return traces[j].q(s, i); });
    gaps += std::string(j < reps ? "errg" : "clique") + "," + std::to_string(j % reps) + "," +
            num(g) + "\n";
  }
  gaps += "errg,mean_path," + num(errg_gap) + "\nclique,mean_path," + num(clique_gap) + "\n";

  std::string csv = "t,fluid_q1,fluid_q2,errg_q1,errg_q2,clique_q1,clique_q2\n";
  for (std::size_t s = 0; s < times.size(); ++s) {
    csv += num(times[s]) + "," + num(fluid_at(times[s], 1)) + "," + num(fluid_at(times[s], 2)) +
           "," + num(average(0, s, 1)) + "," + num(average(0, s, 2)) + "," +
           num(average(reps, s, 1)) + "," + num(average(reps, s, 2)) + "\n";
  }
  res.tables.push_back({table_name(spec, ""), csv});
  res.tables.push_back({table_name(spec, "gaps"), gaps});

  res.checks.push_back(make_check("errg_gap", errg_gap, "<=", tol));
  res.checks.push_back(make_check("clique_gap", clique_gap, "<=", tol));
  res.checks.push_back(make_check("clique_vs_errg", clique_gap - errg_gap, "<=", margin));
  return res;
}

ExperimentResult run_fig_diffusion(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t n = as_size(p.get_u64("n", 10000));
  const double dn = static_cast<double>(n);
  const double lambda_total = p.get_double("lambda_total", dn - std::sqrt(dn));
  const double edge_p = p.get_double("p", std::min(1.0, std::pow(std::log(dn), 2) / std::sqrt(dn)));
  const double horizon = p.get_double("horizon", 20.0);
  const double grid = p.get_double("grid", 0.05);
  const std::uint64_t initial = p.get_u64("initial", 1);
  const double band = p.get_double("band", 15.0);
  const double q3_ceiling = p.get_double("qbar3_ceiling", 0.5);
  const double t_limit = p.get_double("t_stat", -2.0);

  const Graph g = gen_erdos_renyi(n, edge_p, graph_seed(spec, 0));
  res.note("graph", g.label() + " fingerprint " + hex(g.fingerprint()));

  const auto series = parallel_map<DiffusionSeries>(spec.replications, spec.threads, [&](std::size_t r) {
    SimConfig cfg;
    cfg.lambda = lambda_total / dn;
    cfg.horizon = horizon;
    cfg.grid = grid;
    cfg.seed = job_seed(spec, r);
    cfg.initial.assign(n, static_cast<std::uint32_t>(initial));
    return diffusion_scale(simulate(g, cfg), n, lambda_total, 3);
  });

  double max_q1 = 0.0, max_q2 = 0.0, max_q3 = 0.0;
  std::vector<double> x, y;
  std::string csv = "replication,t,qbar1,qbar2,qbar3\n";
  for (std::size_t r = 0; r < series.size(); ++r) {
    const auto& ds = series[r];
    for (std::size_t s = 0; s < ds.times.size(); ++s) {
      const auto& v = ds.scaled[s];
      max_q1 = std::max(max_q1, std::abs(v[0]));
      max_q2 = std::max(max_q2, v[1]);
      max_q3 = std::max(max_q3, v[2]);
      csv += std::to_string(r) + "," + num(ds.times[s]) + "," + num(v[0]) + "," + num(v[1]) + "," +
             num(v[2]) + "\n";
      // Increments on the regular grid only; the final sample at the horizon
      // may be closer than one grid step.
      if (s + 1 < ds.times.size() && std::abs(ds.times[s + 1] - ds.times[s] - grid) < 1e-9) {
        x.push_back(v[1]);
        y.push_back(ds.scaled[s + 1][1] - v[1]);
      }
    }
  }
  const Regression reg = ols(x, y);
  res.note("beta", num(series.front().beta));
  res.note("regression.slope", num(reg.slope));
  res.note("regression.points", std::to_string(reg.points));
  res.tables.push_back({table_name(spec, ""), csv});

  res.checks.push_back(make_check("qbar1_band", max_q1, "<=", band));
  res.checks.push_back(make_check("qbar2_band", max_q2, "<=", band));
  res.checks.push_back(make_check("qbar3_small", max_q3, "<=", q3_ceiling));
  res.checks.push_back(make_check("qbar2_mean_reversion", reg.t_stat, "<", t_limit));
  return res;
}

ExperimentResult run_fig_steady_sweep(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const double lambda = p.get_double("lambda", 0.9);
  const auto grid_n = p.get_u64s("n_grid", {100, 200, 500, 1000, 2000});
  const auto rules = p.get_strings("rules", {"2", "3", "log", "sqrt", "clique"});
  const double horizon = p.get_double("horizon", 250.0);
  const double warmup = p.get_double("warmup", 50.0);
  const double grid = p.get_double("grid", 0.5);
  const double halving = p.get_double("halving", 0.5);
  const double const_floor = p.get_double("const_floor", 0.05);
  const double clique_ceiling = p.get_double("clique_ceiling", 0.02);
  const double band = p.get_double("band", 3.0);
  const std::size_t reps = spec.replications;

  const std::size_t jobs = grid_n.size() * rules.size() * reps;
  const auto runs = parallel_map<SteadyRun>(jobs, spec.threads, [&](std::size_t j) {
    const std::size_t cell = j / reps;
    const std::size_t n = as_size(grid_n[cell / rules.size()]);
    const Graph g = rule_graph(rules[cell % rules.size()], n, graph_seed(spec, j));
    return steady_run(g, lambda, horizon, warmup, grid, job_seed(spec, j), 2);
  });

  // est[rule][n index]
  std::map<std::string, std::vector<Estimate>> est;
  std::string csv = "n,rule,mean_degree,w,w_se\n";
  for (std::size_t ni = 0; ni < grid_n.size(); ++ni) {
    for (std::size_t ri = 0; ri < rules.size(); ++ri) {
      const std::size_t cell = ni * rules.size() + ri;
      std::vector<SteadyRun> mine(runs.begin() + cell * reps, runs.begin() + (cell + 1) * reps);
      const Estimate w = combine_field(mine, [](const SteadyRun& r) { return r.wait; });
      double deg = 0.0;
      for (const auto& r : mine) deg += r.mean_degree / static_cast<double>(reps);
      est[rules[ri]].push_back(w);
      csv += std::to_string(grid_n[ni]) + "," + rules[ri] + "," + num(deg) + "," + num(w.mean) + "," +
             num(w.se) + "\n";
    }
  }
  res.tables.push_back({table_name(spec, ""), csv});

  const auto& sq = est.at("sqrt");
  double worst_rise = -kInf;
  for (std::size_t k = 0; k + 1 < sq.size(); ++k)
    worst_rise = std::max(worst_rise, separation(sq[k + 1].mean, sq[k + 1].se, sq[k].mean, sq[k].se));
  res.checks.push_back(make_check("sqrt_decreasing", worst_rise, "<=", band));
  res.checks.push_back(make_check("sqrt_halving", sq.back().mean / sq.front().mean, "<", halving));
  res.checks.push_back(make_check("const2_bounded", est.at("2").back().mean, ">=", const_floor));
  res.checks.push_back(make_check("clique_vanishing", est.at("clique").back().mean, "<=", clique_ceiling));
  return res;
}

ExperimentResult run_fig_topology_compare(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t n = as_size(p.get_u64("n", 900));
  const auto side = static_cast<std::uint64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  const std::size_t width = as_size(p.get_u64("width", side));
  const std::size_t height = as_size(p.get_u64("height", side));
  require(width * height == n, "grid width x height must equal n");
  const double lambda = p.get_double("lambda", 0.9);
  const double horizon = p.get_double("horizon", 250.0);
  const double warmup = p.get_double("warmup", 50.0);
  const double grid = p.get_double("grid", 0.5);
  const double band = p.get_double("band", 3.0);
  const std::size_t reps = spec.replications;
  const double pair_p = 1.0 / static_cast<double>(n - 1);

  const std::vector<std::string> names = {"ring", "errg2", "rgg2", "grid", "errg4", "rgg4"};
  auto make = [&](std::size_t which, std::uint64_t seed) -> Graph {
    switch (which) {
      case 0: return gen_ring(n);
      case 1: return gen_erdos_renyi(n, 2.0 * pair_p, seed);
      case 2: return gen_rgg_torus(n, rgg_radius_for_degree(n, 2.0), seed);
      case 3: return gen_toric_grid(width, height);
      case 4: return gen_erdos_renyi(n, 4.0 * pair_p, seed);
      default: return gen_rgg_torus(n, rgg_radius_for_degree(n, 4.0), seed);
    }
  };
  const auto runs = parallel_map<SteadyRun>(names.size() * reps, spec.threads, [&](std::size_t j) {
    const Graph g = make(j / reps, graph_seed(spec, j));
    return steady_run(g, lambda, horizon, warmup, grid, job_seed(spec, j), 2);
  });

  std::vector<Estimate> w(names.size());
  std::string csv = "topology,mean_degree,w,w_se\n";
  for (std::size_t k = 0; k < names.size(); ++k) {
    std::vector<SteadyRun> mine(runs.begin() + k * reps, runs.begin() + (k + 1) * reps);
    w[k] = combine_field(mine, [](const SteadyRun& r) { return r.wait; });
    double deg = 0.0;
    for (const auto& r : mine) deg += r.mean_degree / static_cast<double>(reps);
    csv += names[k] + "," + num(deg) + "," + num(w[k].mean) + "," + num(w[k].se) + "\n";
  }
  res.tables.push_back({table_name(spec, ""), csv});

  res.checks.push_back(make_check("ring_below_errg", separation(w[1].mean, w[1].se, w[0].mean, w[0].se), ">=", band));
  res.checks.push_back(make_check("ring_below_rgg", separation(w[2].mean, w[2].se, w[0].mean, w[0].se), ">=", band));
  res.checks.push_back(make_check("rgg_worst_degree2", w[2].mean - std::max(w[0].mean, w[1].mean), ">", 0.0));
  res.checks.push_back(make_check("rgg_worst_degree4", w[5].mean - std::max(w[3].mean, w[4].mean), ">", 0.0));
  double lowest = kInf;
  for (const auto& e : w) lowest = std::min(lowest, e.mean);
  res.checks.push_back(make_check("all_positive", lowest, ">", 0.0));
  return res;
}

ExperimentResult run_fig_load_effect(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  auto lambdas = p.get_doubles("lambdas", {0.65, 0.75, 0.9});
  std::sort(lambdas.begin(), lambdas.end());
  const auto grid_n = p.get_u64s("n_grid", {100, 200, 500, 1000, 2000});
  const std::string rule = p.get_string("rule", "log");
  const double horizon = p.get_double("horizon", 250.0);
  const double warmup = p.get_double("warmup", 50.0);
  const double grid = p.get_double("grid", 0.5);
  const double factor = p.get_double("factor", 0.5);
  const double floor = p.get_double("floor", 0.02);
  const double band = p.get_double("band", 3.0);
  const std::size_t reps = spec.replications;
  require(lambdas.size() >= 2 && grid_n.size() >= 2, "need at least two loads and two sizes");

  // One graph per (n, replication), shared by all loads.
  const std::size_t jobs = grid_n.size() * lambdas.size() * reps;
  const auto runs = parallel_map<SteadyRun>(jobs, spec.threads, [&](std::size_t j) {
    const std::size_t r = j % reps;
    const std::size_t li = (j / reps) % lambdas.size();
    const std::size_t ni = j / (reps * lambdas.size());
    const Graph g = rule_graph(rule, as_size(grid_n[ni]), graph_seed(spec, ni * reps + r));
    return steady_run(g, lambdas[li], horizon, warmup, grid, job_seed(spec, j), 2);
  });

  // w[li][ni]
  std::vector<std::vector<Estimate>> w(lambdas.size(), std::vector<Estimate>(grid_n.size()));
  std::string csv = "n,lambda,w,w_se\n";
  for (std::size_t ni = 0; ni < grid_n.size(); ++ni)
    for (std::size_t li = 0; li < lambdas.size(); ++li) {
      const std::size_t first = (ni * lambdas.size() + li) * reps;
      std::vector<SteadyRun> mine(runs.begin() + first, runs.begin() + first + reps);
      w[li][ni] = combine_field(mine, [](const SteadyRun& r) { return r.wait; });
      csv += std::to_string(grid_n[ni]) + "," + num(lambdas[li]) + "," + num(w[li][ni].mean) + "," +
             num(w[li][ni].se) + "\n";
    }
  res.tables.push_back({table_name(spec, ""), csv});

  double min_sep = kInf;
  for (std::size_t ni = 0; ni < grid_n.size(); ++ni)
    for (std::size_t li = 0; li + 1 < lambdas.size(); ++li)
      min_sep = std::min(min_sep, separation(w[li + 1][ni].mean, w[li + 1][ni].se, w[li][ni].mean,
                                             w[li][ni].se));
  res.checks.push_back(make_check("monotone_in_lambda", min_sep, ">=", band));

  auto ratio = [&](std::size_t li) { return w[li].back().mean / w[li].front().mean; };
  Check fast = make_check("fast_low_load", ratio(0), "<=", factor);
  fast.pass = fast.pass || w[0].back().mean <= floor;
  res.note("fast_low_load.absolute", num(w[0].back().mean) + " (accepted if <= " + num(floor) + ")");
  res.checks.push_back(fast);
  res.checks.push_back(make_check("slower_high_load", ratio(lambdas.size() - 1) - ratio(0), ">", 0.0));
  return res;
}

ExperimentResult run_counterexamples(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t ring_n = as_size(p.get_u64("ring_n", 2000));
  const double ring_lambda = p.get_double("ring_lambda", 0.9);
  const double ring_floor = p.get_double("ring_floor", 0.05);
  const double horizon = p.get_double("horizon", 250.0);
  const double warmup = p.get_double("warmup", 50.0);
  const double grid = p.get_double("grid", 0.5);
  const std::size_t bip_n = as_size(p.get_u64("bip_n", 2000));
  const double bip_c = p.get_double("bip_c", 0.3);
  const double bip_lambda = p.get_double("bip_lambda", 0.9);
  const double bip_horizon = p.get_double("bip_horizon", 20.0);
  const double bip_grid = p.get_double("bip_grid", 0.01);
  const double q2_level = p.get_double("q2_level", 0.05);
  const double fluid_dt = p.get_double("fluid_dt", 1e-4);
  const double fluid_tol = p.get_double("fluid_tolerance", 0.03);
  const double stop_window = p.get_double("stop_window", 0.1);
  const double sub_lambda = p.get_double("sub_lambda", 0.6);
  const double sub_ceiling = p.get_double("sub_ceiling", 0.01);

  const Graph ring = gen_ring(ring_n);
  const Graph bip = gen_complete_bipartite(bip_n, bip_c);
  const std::size_t part_a = bipartite_part_size(bip_n, bip_c);
  std::vector<Vertex> group(part_a);
  for (std::size_t k = 0; k < part_a; ++k) group[k] = static_cast<Vertex>(k);
  res.note("graph.bipartite", bip.label());

  const std::size_t reps = spec.replications;
  // Per replication: ring, supercritical bipartite, subcritical bipartite.
  const auto traces = parallel_map<Trace>(3 * reps, spec.threads, [&](std::size_t j) {
    SimConfig cfg;
    cfg.seed = job_seed(spec, j);
    switch (j % 3) {
      case 0:
        cfg.lambda = ring_lambda;
        cfg.horizon = horizon;
        cfg.grid = grid;
        return simulate(ring, cfg);
      case 1:
        cfg.lambda = bip_lambda;
        cfg.horizon = bip_horizon;
        cfg.grid = bip_grid;
        cfg.group = group;
        return simulate(bip, cfg);
      default:
        cfg.lambda = sub_lambda;
        cfg.horizon = horizon;
        cfg.grid = grid;
        cfg.group = group;
        return simulate(bip, cfg);
    }
  });

  const double dn = static_cast<double>(bip_n);
  const BipartiteTrajectory fluid = bipartite_fluid_integrate(bip_lambda, bip_c, bip_horizon, fluid_dt);
  const double closed_stop = bip_lambda * (1.0 - bip_c) > bip_c
                                 ? -std::log(1.0 - bip_c / (bip_lambda * (1.0 - bip_c)))
                                 : kInf;
  res.note("bipartite.threshold", num(suboptimality_threshold(bip_c)));
  res.note("bipartite.fluid_stop", fluid.stopped ? num(fluid.stop_time) : "none");
  res.note("bipartite.closed_form_stop", num(closed_stop));

  std::vector<Estimate> ring_tail, sub_q2;
  double crossing = 0.0, fluid_gap = 0.0, hit_error = 0.0;
  std::string stat_csv = "case,replication,level,mean,se\n";
  std::string bip_csv = "replication,t,q1,q2,q1a,q2a,fluid_q1a\n";
  for (std::size_t r = 0; r < reps; ++r) {
    const StationarySummary rs = stationary_stats(traces[3 * r], warmup);
    ring_tail.push_back({rs.tail_mean(2), rs.tail_se(2)});
    const StationarySummary ss = stationary_stats(traces[3 * r + 2], warmup);
    const double q2 = ss.mean_q.size() >= 2 ? ss.mean_q[1] : 0.0;
    const double q2se = ss.se_q.size() >= 2 ? ss.se_q[1] : 0.0;
    sub_q2.push_back({q2, q2se});
    for (std::size_t i = 0; i < rs.mean_q.size(); ++i)
      stat_csv += "ring," + std::to_string(r) + "," + std::to_string(i + 1) + "," +
                  num(rs.mean_q[i]) + "," + num(rs.se_q[i]) + "\n";
    for (std::size_t i = 0; i < ss.mean_q.size(); ++i)
      stat_csv += "bipartite_subcritical," + std::to_string(r) + "," + std::to_string(i + 1) + "," +
                  num(ss.mean_q[i]) + "," + num(ss.se_q[i]) + "\n";

    const Trace& bt = traces[3 * r + 1];
    double cross = kInf, hit = kInf;
    for (std::size_t s = 0; s < bt.samples(); ++s) {
      const double t = bt.times[s];
      const double q1a = static_cast<double>(bt.group_count(s, 1)) / dn;
      if (cross == kInf && bt.q(s, 2) > q2_level) cross = t;
      if (hit == kInf && bt.group_count(s, 1) == part_a) hit = t;
      std::string fcol;
      if (fluid.stopped && t <= fluid.stop_time) {
        const double f = interpolate(fluid.times, [&](std::size_t k) { return fluid.q1a[k]; }, t);
        fluid_gap = std::max(fluid_gap, std::abs(q1a - f));
        fcol = num(f);
      }
      bip_csv += std::to_string(r) + "," + num(t) + "," + num(bt.q(s, 1)) + "," + num(bt.q(s, 2)) +
                 "," + num(q1a) + "," + num(static_cast<double>(bt.group_count(s, 2)) / dn) + "," +
                 fcol + "\n";
    }
    crossing = std::max(crossing, cross);
    hit_error = std::max(hit_error, std::abs(hit - closed_stop));
  }
  res.tables.push_back({table_name(spec, "stationary"), stat_csv});
  res.tables.push_back({table_name(spec, "bipartite"), bip_csv});

  const Estimate tail = combine(ring_tail);
  const Estimate sub = combine(sub_q2);
  res.note("subcritical.q2_se", num(sub.se));
  res.checks.push_back(make_check("ring_tail2", tail.mean, ">=", ring_floor));
  res.checks.push_back(make_check("bipartite_q2_crossing", crossing, "<=", bip_horizon));
  res.checks.push_back(make_check("bipartite_fluid_match", fluid.stopped ? fluid_gap : kInf, "<=", fluid_tol));
  res.checks.push_back(make_check("bipartite_saturation_time", hit_error, "<=", stop_window));
  res.checks.push_back(make_check("subcritical_q2", sub.mean, "<=", sub_ceiling));
  return res;
}

ExperimentResult run_coupling_audit(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const auto grid_n = p.get_u64s("n_grid", {200, 800, 3200});
  const auto rules = p.get_strings("rules", {"2", "log", "sqrt_log"});
  const double lambda = p.get_double("lambda", 0.8);
  const double horizon = p.get_double("horizon", 10.0);
  const double grid = p.get_double("grid", 0.1);
  const auto tie = parse_tie_rule(p.get_string("tie_rule", "earliest"));
  require(tie.has_value(), "tie_rule must be earliest or latest");
  const std::string decreasing_rule = p.get_string("decreasing_rule", "sqrt_log");
  const std::string persistent_rule = p.get_string("persistent_rule", "2");
  const double floor = p.get_double("persistent_floor", 0.02);
  const std::size_t reps = spec.replications;

  struct Outcome {
    double d = 0.0;
    std::size_t n_cjsq = 0;
    double delta_frac = 0.0;
    std::int64_t max_gap = 0;
  };
  const std::size_t jobs = rules.size() * grid_n.size() * reps;
  const auto out = parallel_map<Outcome>(jobs, spec.threads, [&](std::size_t j) {
    const std::size_t ri = j / (grid_n.size() * reps);
    const std::size_t n = as_size(grid_n[(j / reps) % grid_n.size()]);
    Outcome o;
    o.d = rule_degree(rules[ri], n);
    o.n_cjsq = static_cast<std::size_t>(std::ceil(static_cast<double>(n) / std::sqrt(o.d)));
    const Graph g = rule_graph(rules[ri], n, graph_seed(spec, j));
    SimConfig cfg;
    cfg.lambda = lambda;
    cfg.horizon = horizon;
    cfg.grid = grid;
    cfg.seed = job_seed(spec, j);
    const CoupledTrace ct = simulate_coupled(g, cfg, o.n_cjsq, *tie);
    o.delta_frac = static_cast<double>(ct.final_delta()) / static_cast<double>(n);
    o.max_gap = ct.max_bound_gap;
    return o;
  });

  std::string runs_csv = "rule,n,degree,cjsq_n,replication,delta_over_n,max_bound_gap\n";
  std::string means_csv = "rule,n,mean_delta_over_n,se\n";
  std::map<std::string, std::vector<double>> means;
  std::int64_t worst_gap = std::numeric_limits<std::int64_t>::min();
  for (std::size_t ri = 0; ri < rules.size(); ++ri)
    for (std::size_t ni = 0; ni < grid_n.size(); ++ni) {
      std::vector<double> fracs;
      for (std::size_t r = 0; r < reps; ++r) {
        const Outcome& o = out[(ri * grid_n.size() + ni) * reps + r];
        worst_gap = std::max(worst_gap, o.max_gap);
        fracs.push_back(o.delta_frac);
        runs_csv += rules[ri] + "," + std::to_string(grid_n[ni]) + "," + num(o.d) + "," +
                    std::to_string(o.n_cjsq) + "," + std::to_string(r) + "," + num(o.delta_frac) +
                    "," + std::to_string(o.max_gap) + "\n";
      }
      const auto [m, se] = mean_and_se(fracs);
      means[rules[ri]].push_back(m);
      means_csv += rules[ri] + "," + std::to_string(grid_n[ni]) + "," + num(m) + "," + num(se) + "\n";
    }
  res.tables.push_back({table_name(spec, "runs"), runs_csv});
  res.tables.push_back({table_name(spec, ""), means_csv});

  res.checks.push_back(make_check("bound_residual", static_cast<double>(worst_gap), "<=", 0.0));
  if (auto it = means.find(decreasing_rule); it != means.end()) {
    double worst_step = -kInf;
    for (std::size_t k = 0; k + 1 < it->second.size(); ++k)
      worst_step = std::max(worst_step, it->second[k + 1] - it->second[k]);
    res.checks.push_back(make_check("sqrt_log_decreasing", worst_step, "<", 0.0));
  } else {
    res.checks.push_back(make_check("sqrt_log_decreasing", kInf, "<", 0.0));
  }
  if (auto it = means.find(persistent_rule); it != means.end()) {
    res.checks.push_back(make_check("const2_persistent", *std::min_element(it->second.begin(), it->second.end()), ">=", floor));
  } else {
    res.checks.push_back(make_check("const2_persistent", -kInf, ">=", floor));
  }
  return res;
}

ExperimentResult run_ordering(const ExperimentSpec& spec) {
  ExperimentResult res = start(spec);
  const Params& p = spec.params;
  const std::size_t n = as_size(p.get_u64("n", 500));
  const std::size_t width = as_size(p.get_u64("width", 25));
  const std::size_t height = as_size(p.get_u64("height", 20));
  require(width * height == n, "grid width x height must equal n");
  const double lambda = p.get_double("lambda", 0.9);
  const double horizon = p.get_double("horizon", 500.0);
  const double warmup = p.get_double("warmup", 100.0);
  const double grid = p.get_double("grid", 0.5);
  const std::size_t levels = as_size(p.get_u64("levels", 3));
  const double band = p.get_double("band", 3.0);
  const std::size_t reps = spec.replications;
  const double dn = static_cast<double>(n);

  const std::vector<std::string> names = {"isolated", "clique", "ring", "errg", "grid"};
  const auto runs = parallel_map<SteadyRun>(names.size() * reps, spec.threads, [&](std::size_t j) {
    Graph g;
    switch (j / reps) {
      case 0: g = gen_isolated(n); break;
      case 1: g = gen_clique(n); break;
      case 2: g = gen_ring(n); break;
      case 3: g = gen_erdos_renyi(n, std::log(dn) / dn, graph_seed(spec, j)); break;
      default: g = gen_toric_grid(width, height); break;
    }
    return steady_run(g, lambda, horizon, warmup, grid, job_seed(spec, j), levels);
  });

  std::vector<std::vector<SteadyRun>> by(names.size());
  for (std::size_t k = 0; k < names.size(); ++k)
    by[k].assign(runs.begin() + k * reps, runs.begin() + (k + 1) * reps);
  std::string csv = "topology,m,tail_mean,tail_se,w,w_se\n";
  std::vector<Estimate> w(names.size());
  std::vector<std::vector<Estimate>> tails(names.size());
  for (std::size_t k = 0; k < names.size(); ++k) {
    w[k] = combine_field(by[k], [](const SteadyRun& r) { return r.wait; });
    for (std::size_t m = 1; m <= levels; ++m) {
      tails[k].push_back(combine_field(by[k], [&](const SteadyRun& r) { return r.tails[m - 1]; }));
      csv += names[k] + "," + std::to_string(m) + "," + num(tails[k].back().mean) + "," +
             num(tails[k].back().se) + "," + num(w[k].mean) + "," + num(w[k].se) + "\n";
    }
  }
  res.tables.push_back({table_name(spec, ""), csv});

  double worst_tail = -kInf;
  for (std::size_t k = 2; k < names.size(); ++k)
    for (std::size_t m = 0; m < levels; ++m)
      worst_tail = std::max(worst_tail, separation(tails[k][m].mean, tails[k][m].se, tails[0][m].mean,
                                                   tails[0][m].se));
  double worst_clique = -kInf;
  for (std::size_t k = 0; k < names.size(); ++k)
    if (k != 1) worst_clique = std::max(worst_clique, separation(w[1].mean, w[1].se, w[k].mean, w[k].se));
  res.checks.push_back(make_check("tail_vs_isolated", worst_tail, "<=", band));
  res.checks.push_back(make_check("clique_wait_minimal", worst_clique, "<=", band));
  return res;
}

// ---------------------------------------------------------------------------

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const KindInfo& info = kind_info(spec.kind);
  ExperimentResult first = finish(info.run(spec), spec);
  if (first.passed() || !spec.retry) return first;
  std::string failed;
  for (const auto& c : first.checks)
    if (!c.pass) failed += (failed.empty() ? "" : " ") + c.name;
  ExperimentSpec again = spec;
  again.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(Stream::kExperiment), 0xffffffffULL);
  ExperimentResult second = finish(info.run(again), again);
  second.note("retry", "first attempt with seed " + std::to_string(spec.seed) + " failed: " + failed);
  return second;
}

ExperimentSpec make_spec(const Config& config, const std::string& section,
                         const std::string& profile, std::uint64_t suite_seed) {
  ExperimentSpec spec;
  spec.name = section;
  Params all(config, section, profile);
  spec.kind = all.get_string("kind", section);
  if (!is_experiment_kind(spec.kind))
    fail(ErrorCode::kInvalidArgument, "unknown experiment '" + spec.kind + "' in [" + section + "]");
  const KindInfo& info = kind_info(spec.kind);
  spec.seed = all.get_u64("seed", derive_seed(suite_seed, static_cast<std::uint64_t>(Stream::kExperiment),
                                              fnv1a(section)));
  spec.replications = as_size(all.get_u64("replications", info.replications));
  if (spec.replications < 1) fail(ErrorCode::kInvalidArgument, "[" + section + "] replications must be >= 1");
  spec.threads = as_size(all.get_u64("threads", 0));
  spec.retry = all.get_bool("retry", true);
  spec.checks = all.get_strings("checks", {});
  for (const auto& c : spec.checks)
    if (std::find(info.checks.begin(), info.checks.end(), c) == info.checks.end())
      fail(ErrorCode::kInvalidArgument, "[" + section + "] unknown check '" + c + "'");
  static const std::set<std::string> common = {"kind", "seed", "replications", "threads", "retry", "checks"};
  for (const auto& [k, v] : all.values()) {
    if (common.count(k)) continue;
    if (std::find(info.keys.begin(), info.keys.end(), k) == info.keys.end())
      fail(ErrorCode::kInvalidArgument, "[" + section + "] unknown key '" + k + "'");
    spec.params.set(k, v);
  }
  // Parse every typed value now so that bad input fails before any run.
  for (const auto& [k, v] : spec.params.values()) {
    if (k == "rules" || k == "rule") {
      for (const auto& r : split_list(v)) validate_rule(r);
    } else if (k == "tie_rule" || k == "decreasing_rule" || k == "persistent_rule") {
      if (k == "tie_rule" && !parse_tie_rule(v))
        fail(ErrorCode::kInvalidArgument, "[" + section + "] tie_rule must be earliest or latest");
      if (k != "tie_rule") validate_rule(v);
    } else {
      for (const auto& item : split_list(v)) (void)parse_double(item, section + "." + k);
    }
  }
  if (spec.kind == "fig_steady_sweep") {
    const auto rules = spec.params.get_strings("rules", {"2", "3", "log", "sqrt", "clique"});
    for (const char* needed : {"2", "sqrt", "clique"})
      if (std::find(rules.begin(), rules.end(), needed) == rules.end())
        fail(ErrorCode::kInvalidArgument, "[" + section + "] rules must include " + needed);
  }
  return spec;
}

std::size_t SuiteReport::failed_checks() const {
  std::size_t failed = 0;
  for (const auto& r : results)
    for (const auto& c : r.checks) failed += c.pass ? 0 : 1;
  return failed;
}

std::string SuiteReport::summary_text() const {
  std::string out;
  std::size_t total = 0;
  for (const auto& r : results) {
    out += "== " + r.name + " (" + r.kind + "): " + (r.passed() ? "pass" : "FAIL") + "\n";
    for (const auto& [k, v] : r.provenance) out += "  " + k + ": " + v + "\n";
    for (const auto& c : r.checks) {
      out += std::string("  [") + (c.pass ? "PASS" : "FAIL") + "] " + c.name + ": " + num(c.measured) +
             " " + c.relation + " " + num(c.tolerance) + "\n";
      ++total;
    }
  }
  out += "checks: " + std::to_string(total - failed_checks()) + " passed, " +
         std::to_string(failed_checks()) + " failed\n";
  return out;
}

std::string SuiteReport::checks_csv() const {
  std::string out = "experiment,check,measured,relation,tolerance,pass\n";
  for (const auto& r : results)
    for (const auto& c : r.checks)
      out += r.name + "," + c.name + "," + num(c.measured) + "," + c.relation + "," + num(c.tolerance) +
             "," + (c.pass ? "true" : "false") + "\n";
  return out;
}

SuiteReport run_all(const Config& config, const std::string& profile, const std::string& out_dir) {
  const Params suite(config, "suite", profile);
  for (const auto& [k, v] : suite.values())
    if (k != "experiments" && k != "seed" && k != "threads")
      fail(ErrorCode::kInvalidArgument, "[suite] unknown key '" + k + "'");
  const auto names = suite.get_strings("experiments", {});
  const std::uint64_t seed = suite.get_u64("seed", 1);
  const std::size_t threads = as_size(suite.get_u64("threads", 0));

  std::vector<ExperimentSpec> specs;
  std::set<std::string> seen;
  for (const auto& name : names) {
    if (!seen.insert(name).second) fail(ErrorCode::kInvalidArgument, "experiment '" + name + "' listed twice");
    if (!config.has_section(name) && !is_experiment_kind(name))
      fail(ErrorCode::kInvalidArgument, "unknown experiment '" + name + "'");
    specs.push_back(make_spec(config, name, profile, seed));
    if (specs.back().threads == 0) specs.back().threads = threads;
  }

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    fail(ErrorCode::kIo, "cannot create output directory '" + out_dir + "'");
  const fs::path probe = fs::path(out_dir) / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) fail(ErrorCode::kIo, "output directory '" + out_dir + "' is not writable");
  }
  fs::remove(probe, ec);

  SuiteReport report;
  for (const auto& spec : specs) {
    report.results.push_back(run_experiment(spec));
    for (const auto& t : report.results.back().tables)
      write_text_file((fs::path(out_dir) / t.file).string(), t.csv);
  }
  write_text_file((fs::path(out_dir) / "summary.txt").string(), report.summary_text());
  write_text_file((fs::path(out_dir) / "checks.csv").string(), report.checks_csv());
  return report;
}

}  // namespace graphlb
