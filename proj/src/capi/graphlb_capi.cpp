#include "graphlb/graphlb.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/config.hpp"
#include "core/connectivity.hpp"
#include "core/coupling.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/experiments.hpp"
#include "core/fluid.hpp"
#include "core/generators.hpp"
#include "core/simulation.hpp"

struct graphlb_graph {
  graphlb::Graph g;
};

struct graphlb_trace {
  graphlb::Trace t;
};

struct graphlb_coupled {
  graphlb::CoupledTrace c;
};

namespace {

thread_local std::string last_error;

template <typename F>
graphlb_status guard(F&& body) {
  last_error.clear();
  try {
    body();
    return GRAPHLB_OK;
  } catch (const graphlb::Error& e) {
    last_error = e.what();
    switch (e.code()) {
      case graphlb::ErrorCode::kInvalidArgument: return GRAPHLB_INVALID_ARGUMENT;
      case graphlb::ErrorCode::kParse: return GRAPHLB_PARSE_ERROR;
      case graphlb::ErrorCode::kIo: return GRAPHLB_IO_ERROR;
      case graphlb::ErrorCode::kBudgetExceeded: return GRAPHLB_BUDGET_EXCEEDED;
      default: return GRAPHLB_INTERNAL_ERROR;
    }
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return GRAPHLB_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return GRAPHLB_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown failure";
    return GRAPHLB_INTERNAL_ERROR;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) graphlb::fail(graphlb::ErrorCode::kInvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

graphlb::SimConfig to_config(const graphlb_sim_params* p) {
  need(p, "params");
  graphlb::SimConfig cfg;
  cfg.lambda = p->lambda;
  cfg.buffer = p->buffer;
  cfg.horizon = p->horizon;
  cfg.grid = p->grid;
  cfg.seed = p->seed;
  if (p->policy != nullptr) {
    auto policy = graphlb::parse_policy(p->policy);
    if (!policy) graphlb::fail(graphlb::ErrorCode::kInvalidArgument, std::string("unknown policy ") + p->policy);
    cfg.policy = *policy;
  }
  cfg.cjsq_n = static_cast<std::size_t>(p->cjsq_n);
  if (p->initial_count > 0) {
    need(p->initial, "initial");
    cfg.initial.assign(p->initial, p->initial + p->initial_count);
  }
  if (p->group_count > 0) {
    need(p->group, "group");
    cfg.group.assign(p->group, p->group + p->group_count);
  }
  cfg.record_waits = p->record_waits != 0;
  return cfg;
}

}  // namespace

extern "C" {

const char* graphlb_version(void) { return GRAPHLB_VERSION; }

const char* graphlb_last_error(void) { return last_error.c_str(); }

void graphlb_string_free(char* s) { std::free(s); }

void graphlb_graph_params_init(graphlb_graph_params* params) {
  if (params == nullptr) return;
  *params = graphlb_graph_params{};
  params->family = "clique";
  params->p = -1.0;
  params->radius = -1.0;
  params->avg_degree = -1.0;
  params->c = -1.0;
}

graphlb_status graphlb_graph_generate(const graphlb_graph_params* params, graphlb_graph** out) {
  return guard([&] {
    need(params, "params");
    need(out, "out");
    need(params->family, "family");
    auto family = graphlb::parse_family(params->family);
    if (!family) graphlb::fail(graphlb::ErrorCode::kInvalidArgument, std::string("unknown family ") + params->family);
    graphlb::GraphGenSpec spec;
    spec.family = *family;
    spec.n = static_cast<std::size_t>(params->n);
    spec.d = static_cast<std::size_t>(params->d);
    spec.seed = params->seed;
    spec.c = params->c;
    spec.width = static_cast<std::size_t>(params->width);
    spec.height = static_cast<std::size_t>(params->height);
    if (spec.family == graphlb::Family::kToricGrid && spec.width == 0 && spec.height == 0) {
      const auto side = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(spec.n))));
      spec.width = spec.height = side;
    }
    spec.p = params->p;
    if (spec.family == graphlb::Family::kErdosRenyi && spec.p < 0.0) {
      graphlb::require(params->avg_degree >= 0.0, "erdos_renyi needs p or an average degree");
      graphlb::require(spec.n >= 2, "erdos_renyi needs n >= 2 to use an average degree");
      spec.p = std::min(1.0, params->avg_degree / static_cast<double>(spec.n - 1));
    }
    spec.radius = params->radius;
    if (spec.family == graphlb::Family::kRggTorus && spec.radius < 0.0) {
      graphlb::require(params->avg_degree > 0.0, "rgg_torus needs a radius or an average degree");
      spec.radius = graphlb::rgg_radius_for_degree(spec.n, params->avg_degree);
    }
    *out = new graphlb_graph{graphlb::generate(spec)};
  });
}

graphlb_status graphlb_graph_parse(const char* text, graphlb_graph** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new graphlb_graph{graphlb::load_edge_list(text)};
  });
}

graphlb_status graphlb_graph_load(const char* path, graphlb_graph** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new graphlb_graph{graphlb::load_edge_list_file(path)};
  });
}

graphlb_status graphlb_graph_save(const graphlb_graph* g, const char* path) {
  return guard([&] {
    need(g, "graph");
    need(path, "path");
    graphlb::save_edge_list_file(g->g, path);
  });
}

graphlb_status graphlb_graph_to_text(const graphlb_graph* g, char** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = dup(graphlb::save_edge_list(g->g));
  });
}

void graphlb_graph_free(graphlb_graph* g) { delete g; }

graphlb_status graphlb_graph_vertex_count(const graphlb_graph* g, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = g->g.vertex_count();
  });
}

graphlb_status graphlb_graph_edge_count(const graphlb_graph* g, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = g->g.edge_count();
  });
}

graphlb_status graphlb_graph_degree(const graphlb_graph* g, uint32_t v, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    graphlb::require(v < g->g.vertex_count(), "vertex out of range");
    *out = g->g.degree(v);
  });
}

graphlb_status graphlb_graph_min_degree(const graphlb_graph* g, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = g->g.min_degree();
  });
}

graphlb_status graphlb_graph_fingerprint(const graphlb_graph* g, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = g->g.fingerprint();
  });
}

graphlb_status graphlb_graph_neighbors(const graphlb_graph* g, uint32_t v, uint32_t* buffer,
                                       size_t capacity, size_t* count) {
  return guard([&] {
    need(g, "graph");
    need(count, "count");
    graphlb::require(v < g->g.vertex_count(), "vertex out of range");
    const auto nb = g->g.neighbors(v);
    *count = nb.size();
    if (capacity > 0) need(buffer, "buffer");
    for (std::size_t i = 0; i < nb.size() && i < capacity; ++i) buffer[i] = nb[i];
  });
}

graphlb_status graphlb_com(const graphlb_graph* g, const uint32_t* set, size_t size, uint64_t* out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    if (size > 0) need(set, "set");
    *out = graphlb::com(g->g, std::span<const graphlb::Vertex>(set, size));
  });
}

graphlb_status graphlb_dis(const graphlb_graph* g, const graphlb_dis_options* options,
                           graphlb_dis_result* out, char** report) {
  return guard([&] {
    need(g, "graph");
    need(options, "options");
    need(out, "out");
    auto scale = graphlb::parse_scale(options->scale ? options->scale : "fluid");
    if (!scale) graphlb::fail(graphlb::ErrorCode::kInvalidArgument, "scale must be fluid or diffusion");
    const std::string mode = options->mode ? options->mode : "auto";
    const std::uint64_t budget = options->budget ? options->budget : graphlb::kDefaultEnumerationBudget;
    graphlb::DisReport r;
    if (mode == "exact") {
      r = graphlb::dis_exact(g->g, options->epsilon, *scale, budget);
    } else if (mode == "heuristic") {
      r = graphlb::dis_heuristic(g->g, options->epsilon, *scale, options->effort, options->seed);
    } else if (mode == "auto") {
      const std::size_t k = graphlb::threshold_size(g->g.vertex_count(), options->epsilon, *scale);
      if (graphlb::binomial_saturating(g->g.vertex_count(), k) <= budget)
        r = graphlb::dis_exact(g->g, options->epsilon, *scale, budget);
      else
        r = graphlb::dis_heuristic(g->g, options->epsilon, *scale, options->effort, options->seed);
    } else {
      graphlb::fail(graphlb::ErrorCode::kInvalidArgument, "mode must be exact, heuristic or auto");
    }
    out->value = r.value;
    out->lower_bound = r.lower_bound ? 1 : 0;
    out->threshold_size = r.threshold_size;
    if (report != nullptr) {
      std::string text = "epsilon: " + graphlb::format_number(r.epsilon) + "\n";
      text += "scale: " + std::string(graphlb::scale_name(r.scale)) + "\n";
      text += "threshold_size: " + std::to_string(r.threshold_size) + "\n";
      text += "value: " + std::to_string(r.value) + "\n";
      text += std::string("lower_bound: ") + (r.lower_bound ? "true" : "false") + "\n";
      text += "method: " + std::string(graphlb::method_name(r.method)) + "\n";
      text += "witness:";
      for (auto v : r.witness) text += " " + std::to_string(v);
      text += "\n";
      *report = dup(text);
    }
  });
}

graphlb_status graphlb_audit(const graphlb_graph* g, const double* epsilons, size_t count,
                             uint64_t effort, uint64_t seed, uint64_t budget, char** report) {
  return guard([&] {
    need(g, "graph");
    need(report, "report");
    if (count > 0) need(epsilons, "epsilons");
    graphlb::AuditOptions opts;
    opts.effort = static_cast<std::size_t>(effort);
    opts.seed = seed;
    if (budget) opts.budget = budget;
    const auto r = graphlb::optimality_audit(g->g, std::span<const double>(epsilons, count), opts);
    *report = dup(r.to_text());
  });
}

void graphlb_sim_params_init(graphlb_sim_params* params) {
  if (params == nullptr) return;
  *params = graphlb_sim_params{};
  params->lambda = 0.9;
  params->buffer = GRAPHLB_INFINITE_BUFFER;
  params->horizon = 100.0;
  params->grid = 0.5;
  params->policy = "graph_jsq";
}

graphlb_status graphlb_simulate(const graphlb_graph* g, const graphlb_sim_params* params,
                                graphlb_trace** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    *out = new graphlb_trace{graphlb::simulate(g->g, to_config(params))};
  });
}

graphlb_status graphlb_trace_load_csv(const char* path, uint64_t n, graphlb_trace** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new graphlb_trace{graphlb::trace_from_csv(graphlb::read_text_file(path), n)};
  });
}

void graphlb_trace_free(graphlb_trace* t) { delete t; }

graphlb_status graphlb_trace_samples(const graphlb_trace* t, size_t* out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    *out = t->t.samples();
  });
}

graphlb_status graphlb_trace_time(const graphlb_trace* t, size_t sample, double* out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    graphlb::require(sample < t->t.samples(), "sample out of range");
    *out = t->t.times[sample];
  });
}

graphlb_status graphlb_trace_q(const graphlb_trace* t, size_t sample, size_t level, double* out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    graphlb::require(sample < t->t.samples(), "sample out of range");
    graphlb::require(level >= 1, "levels start at 1");
    *out = t->t.q(sample, level);
  });
}

graphlb_status graphlb_trace_to_csv(const graphlb_trace* t, char** out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    *out = dup(graphlb::trace_to_csv(t->t));
  });
}

graphlb_status graphlb_trace_write_csv(const graphlb_trace* t, const char* path) {
  return guard([&] {
    need(t, "trace");
    need(path, "path");
    graphlb::write_text_file(path, graphlb::trace_to_csv(t->t));
  });
}

graphlb_status graphlb_trace_stationary(const graphlb_trace* t, double warmup, size_t batches,
                                        double* mean_q, double* se_q, size_t capacity,
                                        graphlb_stationary* out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    const auto s = graphlb::stationary_stats(t->t, warmup, batches ? batches : graphlb::kDefaultBatches);
    out->levels = std::min(capacity, s.mean_q.size());
    for (std::size_t i = 0; i < out->levels; ++i) {
      if (mean_q) mean_q[i] = s.mean_q[i];
      if (se_q) se_q[i] = s.se_q[i];
    }
    out->wait_little = s.wait_little;
    out->wait_little_se = s.wait_little_se;
    out->has_fcfs = s.has_fcfs ? 1 : 0;
    out->wait_fcfs = s.wait_fcfs;
    out->wait_fcfs_se = s.wait_fcfs_se;
  });
}

graphlb_status graphlb_simulate_coupled(const graphlb_graph* g, const graphlb_sim_params* params,
                                        uint64_t n, const char* tie_rule, graphlb_coupled** out) {
  return guard([&] {
    need(g, "graph");
    need(out, "out");
    auto rule = graphlb::parse_tie_rule(tie_rule ? tie_rule : "earliest");
    if (!rule) graphlb::fail(graphlb::ErrorCode::kInvalidArgument, "tie rule must be earliest or latest");
    *out = new graphlb_coupled{graphlb::simulate_coupled(g->g, to_config(params), n, *rule)};
  });
}

void graphlb_coupled_free(graphlb_coupled* c) { delete c; }

graphlb_status graphlb_coupled_summary(const graphlb_coupled* c, uint64_t* final_delta,
                                       int64_t* max_bound_gap) {
  return guard([&] {
    need(c, "coupled trace");
    if (final_delta) *final_delta = c->c.final_delta();
    if (max_bound_gap) *max_bound_gap = c->c.max_bound_gap;
  });
}

graphlb_status graphlb_coupled_to_csv(const graphlb_coupled* c, char** out) {
  return guard([&] {
    need(c, "coupled trace");
    need(out, "out");
    *out = dup(graphlb::coupled_to_csv(c->c));
  });
}

graphlb_status graphlb_coupled_write_csv(const graphlb_coupled* c, const char* path) {
  return guard([&] {
    need(c, "coupled trace");
    need(path, "path");
    graphlb::write_text_file(path, graphlb::coupled_to_csv(c->c));
  });
}

graphlb_status graphlb_fluid_rhs(const double* q, size_t k, double lambda, double* out) {
  return guard([&] {
    need(q, "q");
    need(out, "out");
    const auto d = graphlb::fluid_rhs(std::span<const double>(q, k), lambda);
    std::copy(d.begin(), d.end(), out);
  });
}

graphlb_status graphlb_fluid_endpoint(const double* q0, size_t k, double lambda, double horizon,
                                      double dt, double* out) {
  return guard([&] {
    need(q0, "q0");
    need(out, "out");
    const auto traj = graphlb::fluid_integrate(graphlb::FluidVector(q0, q0 + k), lambda, horizon, dt, horizon);
    const auto& last = traj.states.back();
    std::copy(last.begin(), last.end(), out);
  });
}

graphlb_status graphlb_fluid_csv(double lambda, double horizon, double dt, double sample_every,
                                 size_t levels, char** out) {
  return guard([&] {
    need(out, "out");
    const std::size_t k = levels ? levels : graphlb::default_fluid_levels(lambda);
    const auto traj = graphlb::fluid_integrate(graphlb::FluidVector(k, 0.0), lambda, horizon, dt, sample_every);
    *out = dup(graphlb::fluid_to_csv(traj));
  });
}

graphlb_status graphlb_scale_csv(const graphlb_trace* t, uint64_t n, double lambda_total,
                                 size_t levels, char** out) {
  return guard([&] {
    need(t, "trace");
    need(out, "out");
    *out = dup(graphlb::diffusion_to_csv(graphlb::diffusion_scale(t->t, n, lambda_total, levels)));
  });
}

graphlb_status graphlb_suboptimality_threshold(double c, double* out) {
  return guard([&] {
    need(out, "out");
    *out = graphlb::suboptimality_threshold(c);
  });
}

graphlb_status graphlb_bipartite_stop_time(double lambda, double c, double horizon, double dt,
                                           int* stopped, double* out) {
  return guard([&] {
    need(stopped, "stopped");
    need(out, "out");
    const auto traj = graphlb::bipartite_fluid_integrate(lambda, c, horizon, dt);
    *stopped = traj.stopped ? 1 : 0;
    *out = traj.stop_time;
  });
}

graphlb_status graphlb_run_experiments(const char* config_path, const char* profile,
                                       const char* out_dir, uint64_t* failed_checks,
                                       char** summary) {
  return guard([&] {
    need(config_path, "config path");
    need(out_dir, "output directory");
    const auto config = graphlb::Config::load(config_path);
    const auto report = graphlb::run_all(config, profile ? profile : "", out_dir);
    if (failed_checks) *failed_checks = report.failed_checks();
    if (summary) *summary = dup(report.summary_text());
  });
}

}  // extern "C"
