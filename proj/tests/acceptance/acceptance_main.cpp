// Runs every acceptance criterion and prints one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/connectivity.hpp"
#include "core/coupling.hpp"
#include "core/csv.hpp"
#include "core/experiments.hpp"
#include "core/fluid.hpp"
#include "core/generators.hpp"
#include "core/rng.hpp"

using namespace graphlb;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string checks_detail(const ExperimentResult& r) {
  std::ostringstream os;
  for (const auto& c : r.checks)
    os << (c.pass ? "" : "!") << c.name << "=" << format_number(c.measured) << c.relation
       << format_number(c.tolerance) << " ";
  for (const auto& [k, v] : r.provenance)
    if (k == "retry") os << "(retried) ";
  return os.str();
}

Outcome from_experiment(const std::string& kind, std::uint64_t seed, std::vector<std::string> checks = {}) {
  ExperimentSpec spec;
  spec.name = kind;
  spec.kind = kind;
  spec.seed = seed;
  spec.checks = std::move(checks);
  Config empty;
  const ExperimentSpec defaults = make_spec(empty, kind, "", 0);
  spec.replications = defaults.replications;
  const ExperimentResult r = run_experiment(spec);
  return {r.passed() && !r.checks.empty(), checks_detail(r)};
}

// 1
Outcome mm1() { return from_experiment("mm1_oracle", 101); }

// 2
Outcome fluid_reproduction() { return from_experiment("fig_fluid", 102, {"errg_gap", "clique_gap"}); }

// 3
Outcome fixed_point() {
  double worst_end = 0.0, worst_closed = 0.0;
  for (double lambda : {0.5, 0.8, 0.95}) {
    const auto traj = fluid_integrate(FluidVector(default_fluid_levels(lambda), 0.0), lambda, 50.0, 1e-3);
    const auto& end = traj.states.back();
    worst_end = std::max(worst_end, std::abs(end[0] - lambda));
    for (std::size_t i = 1; i < end.size(); ++i) worst_end = std::max(worst_end, end[i]);
    for (std::size_t s = 0; s < traj.times.size(); ++s)
      worst_closed = std::max(worst_closed, std::abs(traj.states[s][0] - lambda * (1.0 - std::exp(-traj.times[s]))));
  }
  std::ostringstream os;
  os << "endpoint_gap=" << worst_end << " closed_form_gap=" << worst_closed;
  return {worst_end <= 1e-4 && worst_closed <= 1e-6, os.str()};
}

// 4
Outcome coupling_bound() {
  Rng rng(derive_seed(104, static_cast<std::uint64_t>(Stream::kExperiment), 0));
  std::size_t violations = 0, runs = 0;
  std::int64_t worst = -1'000'000;
  for (int k = 0; k < 20; ++k) {
    const std::size_t n = 20 + rng.below(181);
    const double p = (1.0 + 10.0 * rng.uniform()) / static_cast<double>(n);
    const Graph g = gen_erdos_renyi(n, p, rng.below(1u << 30));
    SimConfig cfg;
    cfg.lambda = 0.5 + 0.49 * rng.uniform();
    cfg.horizon = 30.0;
    cfg.grid = 0.5;
    cfg.seed = rng.below(1u << 30);
    const std::size_t hybrid_n = rng.below(n / 4 + 1);
    for (TieRule rule : {TieRule::kEarliest, TieRule::kLatest}) {
      const CoupledTrace c = simulate_coupled(g, cfg, hybrid_n, rule);
      ++runs;
      worst = std::max(worst, c.max_bound_gap);
      if (c.max_bound_gap > 0) ++violations;
    }
  }
  std::ostringstream os;
  os << "runs=" << runs << " violations=" << violations << " max_gap=" << worst;
  return {violations == 0, os.str()};
}

// 5
Outcome clique_degeneracy() {
  bool ok = true;
  std::uint64_t total_delta = 0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (std::size_t n : {0u, 1u, 7u, 49u}) {
      SimConfig cfg;
      cfg.lambda = 0.95;
      cfg.horizon = 30.0;
      cfg.grid = 0.5;
      cfg.seed = 500 + seed;
      const CoupledTrace c = simulate_coupled(gen_clique(50), cfg, n);
      total_delta += c.final_delta();
      ok = ok && c.final_delta() == 0 && c.graph_system.occupancy == c.hybrid_system.occupancy;
    }
  }
  return {ok, "total_delta=" + std::to_string(total_delta)};
}

// 6
Outcome delta_scaling() { return from_experiment("coupling_audit", 106, {"bound_residual", "sqrt_log_decreasing"}); }

// 7: all-subsets oracle written independently of the library.
std::size_t oracle_dis(const Graph& g, std::size_t k) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint32_t> closed(n);
  for (Vertex v = 0; v < n; ++v) {
    closed[v] = 1u << v;
    for (Vertex w : g.neighbors(v)) closed[v] |= 1u << w;
  }
  std::size_t best = 0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) < k) continue;
    std::uint32_t cover = 0;
    for (Vertex v = 0; v < n; ++v)
      if (mask & (1u << v)) cover |= closed[v];
    best = std::max(best, n - static_cast<std::size_t>(__builtin_popcount(cover)));
  }
  return best;
}

Outcome dis_oracle() {
  Rng rng(107);
  std::size_t compared = 0, mismatches = 0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = 4 + rng.below(9);
    const Graph g = gen_erdos_renyi(n, 0.05 + 0.5 * rng.uniform(), rng.below(1u << 30));
    for (Scale s : {Scale::kFluid, Scale::kDiffusion}) {
      for (double eps : {0.2, 0.4}) {
        const std::size_t t = threshold_size(n, eps, s);
        if (t < 1) continue;
        ++compared;
        if (dis_exact(g, eps, s).value != oracle_dis(g, t)) ++mismatches;
      }
    }
  }
  return {mismatches == 0 && compared == 200,
          "comparisons=" + std::to_string(compared) + " mismatches=" + std::to_string(mismatches)};
}

// 8
Outcome suboptimality() { return from_experiment("counterexamples", 108); }

// 9
Outcome diffusion() { return from_experiment("fig_diffusion", 109); }

// 10
Outcome ordering() { return from_experiment("ordering", 110); }

// 11: a reduced instance of every experiment kind, run twice.
const char* kDeterminismSuite = R"(
[suite]
experiments = mm1_oracle, fig_fluid, fig_diffusion, fig_steady_sweep, fig_topology_compare, fig_load_effect, counterexamples, coupling_audit, ordering
seed = 11
threads = 2
[mm1_oracle]
n = 30
horizon = 200
warmup = 50
[fig_fluid]
n = 500
p = 0.05
horizon = 3
[fig_diffusion]
n = 400
lambda_total = 380
horizon = 3
replications = 2
[fig_steady_sweep]
n_grid = 50, 100
rules = 2, sqrt, clique
horizon = 40
warmup = 10
[fig_topology_compare]
n = 100
width = 10
height = 10
horizon = 40
warmup = 10
[fig_load_effect]
n_grid = 50, 100
horizon = 40
warmup = 10
[counterexamples]
ring_n = 100
horizon = 40
warmup = 10
bip_n = 200
bip_horizon = 3
[coupling_audit]
n_grid = 50, 100
replications = 2
horizon = 3
[ordering]
n = 100
width = 10
height = 10
horizon = 40
warmup = 10
)";

std::vector<std::pair<std::string, std::string>> read_dir(const fs::path& dir) {
  std::vector<std::pair<std::string, std::string>> files;
  for (const auto& e : fs::directory_iterator(dir))
    files.push_back({e.path().filename().string(), read_text_file(e.path().string())});
  std::sort(files.begin(), files.end());
  return files;
}

Outcome determinism() {
  const fs::path base = fs::temp_directory_path() / "graphlb_acceptance_determinism";
  fs::remove_all(base);
  const Config config = Config::parse(kDeterminismSuite);
  run_all(config, "", (base / "a").string());
  run_all(config, "", (base / "b").string());
  const auto a = read_dir(base / "a");
  const auto b = read_dir(base / "b");
  std::size_t csvs = 0;
  for (const auto& [name, body] : a)
    if (name.size() > 4 && name.substr(name.size() - 4) == ".csv") ++csvs;
  const bool same = a == b;
  fs::remove_all(base);
  return {same && csvs >= 10, "files=" + std::to_string(a.size()) + " csv=" + std::to_string(csvs) +
                                  (same ? " identical" : " differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"1 mm1 oracle", mm1},
      {"2 fluid reproduction", fluid_reproduction},
      {"3 fluid fixed point", fixed_point},
      {"4 coupling bound", coupling_bound},
      {"5 clique coupling degeneracy", clique_degeneracy},
      {"6 delta scaling", delta_scaling},
      {"7 dis oracle equivalence", dis_oracle},
      {"8 sub-optimality detections", suboptimality},
      {"9 diffusion-scale sanity", diffusion},
      {"10 ordering properties", ordering},
      {"11 determinism", determinism},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %s: %s[%.1fs]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
