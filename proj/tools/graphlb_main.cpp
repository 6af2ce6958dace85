// graphlb command line front end. Everything goes through the C API.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "graphlb/graphlb.h"

namespace {

struct Failure {
  int status;
};

void check(graphlb_status st) {
  if (st != GRAPHLB_OK) {
    std::cerr << "graphlb: " << graphlb_last_error() << "\n";
    throw Failure{static_cast<int>(st)};
  }
}

struct StringDeleter {
  void operator()(char* s) const { graphlb_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct GraphDeleter {
  void operator()(graphlb_graph* g) const { graphlb_graph_free(g); }
};
using GraphPtr = std::unique_ptr<graphlb_graph, GraphDeleter>;

struct TraceDeleter {
  void operator()(graphlb_trace* t) const { graphlb_trace_free(t); }
};
using TracePtr = std::unique_ptr<graphlb_trace, TraceDeleter>;

struct CoupledDeleter {
  void operator()(graphlb_coupled* c) const { graphlb_coupled_free(c); }
};

GraphPtr load_graph(const std::string& path) {
  graphlb_graph* g = nullptr;
  check(graphlb_graph_load(path.c_str(), &g));
  return GraphPtr(g);
}

void write_or_print(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    std::cerr << "graphlb: cannot write " << path << "\n";
    throw Failure{GRAPHLB_IO_ERROR};
  }
  f << text;
}

uint32_t parse_buffer(const std::string& b) {
  if (b == "inf") return GRAPHLB_INFINITE_BUFFER;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(b, &used);
    if (used == b.size() && v >= 1 && v < GRAPHLB_INFINITE_BUFFER) return static_cast<uint32_t>(v);
  } catch (const std::exception&) {
  }
  std::cerr << "graphlb: --b must be a positive integer or inf\n";
  throw Failure{GRAPHLB_INVALID_ARGUMENT};
}

struct SimArgs {
  std::string graph;
  double lambda = 0.9;
  std::string buffer = "inf";
  double horizon = 100.0;
  uint64_t seed = 0;
  double grid = 0.5;
  uint32_t initial = 0;
  std::string out;
};

void add_sim_options(CLI::App* cmd, SimArgs& a) {
  cmd->add_option("--graph", a.graph, "edge-list file")->required();
  cmd->add_option("--lambda", a.lambda, "arrival rate per server")->check(CLI::PositiveNumber);
  cmd->add_option("--b", a.buffer, "buffer size per server, or inf");
  cmd->add_option("--T", a.horizon, "time horizon")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", a.seed, "random seed");
  cmd->add_option("--grid", a.grid, "sample spacing")->check(CLI::PositiveNumber);
  cmd->add_option("--initial", a.initial, "initial queue length at every server");
  cmd->add_option("-o,--out", a.out, "output CSV (default stdout)");
}

graphlb_sim_params sim_params(const SimArgs& a, std::vector<uint32_t>& initial, uint64_t n) {
  graphlb_sim_params p;
  graphlb_sim_params_init(&p);
  p.lambda = a.lambda;
  p.buffer = parse_buffer(a.buffer);
  p.horizon = a.horizon;
  p.seed = a.seed;
  p.grid = a.grid;
  if (a.initial > 0) {
    initial.assign(n, a.initial);
    p.initial = initial.data();
    p.initial_count = initial.size();
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-constrained join-the-shortest-queue simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(graphlb_version()));

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph and write it as an edge list");
  std::string family, gen_out;
  uint64_t gen_n = 0, gen_d = 0, gen_seed = 0, width = 0, height = 0;
  double gen_p = -1.0, gen_c = -1.0, gen_radius = -1.0;
  gen->add_option("--family", family, "clique, ring, toric_grid, erdos_renyi, erased_regular, rgg_torus, complete_bipartite, isolated")->required();
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--p", gen_p, "edge probability (erdos_renyi)");
  gen->add_option("--d", gen_d, "degree (erased_regular)");
  gen->add_option("--c", gen_c, "average degree (erdos_renyi, rgg_torus) or part fraction (complete_bipartite)");
  gen->add_option("--radius", gen_radius, "connection radius (rgg_torus)");
  gen->add_option("--width", width, "grid width (toric_grid)");
  gen->add_option("--height", height, "grid height (toric_grid)");
  gen->add_option("--seed", gen_seed, "random seed");
  gen->add_option("-o,--out", gen_out, "output file (default stdout)");

  // dis
  auto* dis = app.add_subcommand("dis", "compute dis_1 or dis_2 for one epsilon");
  std::string dis_graph, dis_scale = "fluid", dis_mode = "exact", dis_report;
  double dis_eps = 0.1;
  uint64_t dis_effort = 1000, dis_seed = 0, dis_budget = 0;
  dis->add_option("--graph", dis_graph, "edge-list file")->required();
  dis->add_option("--epsilon", dis_eps, "subset fraction")->check(CLI::Range(0.0, 1.0));
  dis->add_option("--scale", dis_scale, "fluid or diffusion")->check(CLI::IsMember({"fluid", "diffusion"}));
  dis->add_option("--mode", dis_mode, "exact, heuristic or auto")->check(CLI::IsMember({"exact", "heuristic", "auto"}));
  dis->add_option("--effort", dis_effort, "random subsets for the heuristic");
  dis->add_option("--seed", dis_seed, "random seed");
  dis->add_option("--budget", dis_budget, "exact enumeration limit");
  dis->add_option("--report", dis_report, "write a key: value report");

  // audit
  auto* audit = app.add_subcommand("audit", "well-connectedness diagnostics for one graph");
  std::string audit_graph, audit_out;
  std::vector<double> audit_eps = {0.1, 0.2, 0.5};
  uint64_t audit_effort = 1000, audit_seed = 0, audit_budget = 0;
  audit->add_option("--graph", audit_graph, "edge-list file")->required();
  audit->add_option("--epsilon", audit_eps, "subset fractions")->delimiter(',');
  audit->add_option("--effort", audit_effort, "random subsets for the heuristic");
  audit->add_option("--seed", audit_seed, "random seed");
  audit->add_option("--budget", audit_budget, "exact enumeration limit");
  audit->add_option("-o,--out", audit_out, "report file (default stdout)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "simulate the load balancing process");
  SimArgs sim;
  std::string policy = "graph_jsq";
  uint64_t cjsq_n = 0;
  double warmup = -1.0;
  bool waits = false;
  add_sim_options(simulate, sim);
  simulate->add_option("--policy", policy, "graph_jsq, cjsq_n or isolated")->check(CLI::IsMember({"graph_jsq", "cjsq_n", "isolated"}));
  simulate->add_option("--n", cjsq_n, "n for the cjsq_n policy");
  simulate->add_option("--warmup", warmup, "print a stationary summary after this time");
  simulate->add_flag("--waits", waits, "record FCFS waiting times");

  // couple
  auto* couple = app.add_subcommand("couple", "run the graph system coupled with I(G, n)");
  SimArgs cpl;
  uint64_t couple_n = 0;
  std::string tie = "earliest";
  add_sim_options(couple, cpl);
  couple->add_option("--n", couple_n, "size parameter n of the hybrid scheme")->required();
  couple->add_option("--tie", tie, "earliest or latest")->check(CLI::IsMember({"earliest", "latest"}));

  // fluid
  auto* fluid = app.add_subcommand("fluid", "integrate the clique fluid limit from the empty state");
  double fl_lambda = 0.8, fl_T = 10.0, fl_dt = 1e-3, fl_sample = 0.0;
  std::size_t fl_levels = 0;
  std::string fl_out;
  fluid->add_option("--lambda", fl_lambda, "arrival rate per server")->check(CLI::Range(0.0, 1.0));
  fluid->add_option("--T", fl_T, "time horizon")->check(CLI::PositiveNumber);
  fluid->add_option("--dt", fl_dt, "step size")->check(CLI::PositiveNumber);
  fluid->add_option("--sample", fl_sample, "output spacing (default every step)");
  fluid->add_option("--levels", fl_levels, "truncation level");
  fluid->add_option("-o,--out", fl_out, "output CSV (default stdout)");

  // scale
  auto* scale = app.add_subcommand("scale", "diffusion-scale a trace");
  std::string sc_trace, sc_out;
  uint64_t sc_n = 0;
  double sc_lambda = 0.0;
  std::size_t sc_levels = 0;
  scale->add_option("--trace", sc_trace, "trace CSV")->required();
  scale->add_option("--N", sc_n, "number of servers")->required();
  scale->add_option("--lambdaN", sc_lambda, "total arrival rate")->required();
  scale->add_option("--levels", sc_levels, "levels to emit");
  scale->add_option("-o,--out", sc_out, "output CSV (default stdout)");

  // threshold
  auto* threshold = app.add_subcommand("threshold", "load above which the bipartite sequence fails");
  double th_c = 0.3;
  threshold->add_option("--c", th_c, "part fraction in (0, 1/2)")->required();

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment suite");
  std::string ex_config, ex_profile = "ci", ex_out = "results";
  experiment->add_option("--config", ex_config, "suite config file")->required();
  experiment->add_option("--profile", ex_profile, "ci or full");
  experiment->add_option("--out", ex_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      graphlb_graph_params p;
      graphlb_graph_params_init(&p);
      p.family = family.c_str();
      p.n = gen_n;
      p.p = gen_p;
      p.d = gen_d;
      p.radius = gen_radius;
      p.width = width;
      p.height = height;
      p.seed = gen_seed;
      if (family == "complete_bipartite") p.c = gen_c;
      else p.avg_degree = gen_c;
      graphlb_graph* raw = nullptr;
      check(graphlb_graph_generate(&p, &raw));
      GraphPtr g(raw);
      char* text = nullptr;
      check(graphlb_graph_to_text(g.get(), &text));
      write_or_print(gen_out, CString(text).get());
      uint64_t edges = 0;
      check(graphlb_graph_edge_count(g.get(), &edges));
      if (!gen_out.empty()) std::cerr << family << ": " << gen_n << " vertices, " << edges << " edges\n";
    } else if (*dis) {
      GraphPtr g = load_graph(dis_graph);
      graphlb_dis_options o{dis_eps, dis_scale.c_str(), dis_mode.c_str(), dis_effort, dis_seed, dis_budget};
      graphlb_dis_result r{};
      char* report = nullptr;
      check(graphlb_dis(g.get(), &o, &r, &report));
      CString rep(report);
      std::cout << (dis_scale == "fluid" ? "dis1" : "dis2") << "(eps=" << dis_eps << ", k=" << r.threshold_size
                << ") " << (r.lower_bound ? ">= " : "= ") << r.value << "\n";
      if (!dis_report.empty()) write_or_print(dis_report, rep.get());
    } else if (*audit) {
      GraphPtr g = load_graph(audit_graph);
      char* report = nullptr;
      check(graphlb_audit(g.get(), audit_eps.data(), audit_eps.size(), audit_effort, audit_seed, audit_budget, &report));
      write_or_print(audit_out, CString(report).get());
    } else if (*simulate) {
      GraphPtr g = load_graph(sim.graph);
      uint64_t n = 0;
      check(graphlb_graph_vertex_count(g.get(), &n));
      std::vector<uint32_t> initial;
      graphlb_sim_params p = sim_params(sim, initial, n);
      p.policy = policy.c_str();
      p.cjsq_n = cjsq_n;
      p.record_waits = waits ? 1 : 0;
      graphlb_trace* raw = nullptr;
      check(graphlb_simulate(g.get(), &p, &raw));
      TracePtr t(raw);
      char* csv = nullptr;
      check(graphlb_trace_to_csv(t.get(), &csv));
      write_or_print(sim.out, CString(csv).get());
      if (warmup >= 0.0) {
        std::vector<double> mean(64), se(64);
        graphlb_stationary s{};
        check(graphlb_trace_stationary(t.get(), warmup, 0, mean.data(), se.data(), mean.size(), &s));
        std::cerr << "W (Little) = " << s.wait_little << " +- " << s.wait_little_se << "\n";
        if (s.has_fcfs) std::cerr << "W (FCFS)   = " << s.wait_fcfs << " +- " << s.wait_fcfs_se << "\n";
        for (std::size_t i = 0; i < s.levels && i < 4; ++i)
          std::cerr << "q" << i + 1 << " = " << mean[i] << " +- " << se[i] << "\n";
      }
    } else if (*couple) {
      GraphPtr g = load_graph(cpl.graph);
      uint64_t n = 0;
      check(graphlb_graph_vertex_count(g.get(), &n));
      std::vector<uint32_t> initial;
      graphlb_sim_params p = sim_params(cpl, initial, n);
      graphlb_coupled* raw = nullptr;
      check(graphlb_simulate_coupled(g.get(), &p, couple_n, tie.c_str(), &raw));
      std::unique_ptr<graphlb_coupled, CoupledDeleter> c(raw);
      char* csv = nullptr;
      check(graphlb_coupled_to_csv(c.get(), &csv));
      write_or_print(cpl.out, CString(csv).get());
      uint64_t delta = 0;
      int64_t gap = 0;
      check(graphlb_coupled_summary(c.get(), &delta, &gap));
      std::cerr << "delta(T) = " << delta << ", max bound gap = " << gap << "\n";
    } else if (*fluid) {
      char* csv = nullptr;
      check(graphlb_fluid_csv(fl_lambda, fl_T, fl_dt, fl_sample, fl_levels, &csv));
      write_or_print(fl_out, CString(csv).get());
    } else if (*scale) {
      graphlb_trace* raw = nullptr;
      check(graphlb_trace_load_csv(sc_trace.c_str(), sc_n, &raw));
      TracePtr t(raw);
      char* csv = nullptr;
      check(graphlb_scale_csv(t.get(), sc_n, sc_lambda, sc_levels, &csv));
      write_or_print(sc_out, CString(csv).get());
    } else if (*threshold) {
      double v = 0.0;
      check(graphlb_suboptimality_threshold(th_c, &v));
      std::printf("%.17g\n", v);
    } else if (*experiment) {
      uint64_t failed = 0;
      char* summary = nullptr;
      check(graphlb_run_experiments(ex_config.c_str(), ex_profile.c_str(), ex_out.c_str(), &failed, &summary));
      std::cout << CString(summary).get();
      return failed == 0 ? 0 : 1;
    }
  } catch (const Failure&) {
    return 2;
  }
  return 0;
}
