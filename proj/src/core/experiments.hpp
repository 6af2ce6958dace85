#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "core/config.hpp"

namespace graphlb {

struct Check {
  std::string name;
  double measured = 0.0;
  std::string relation;   // "<=", "<", ">=", ">"
  double tolerance = 0.0;
  bool pass = false;
};

Check make_check(std::string name, double measured, std::string relation, double tolerance);

struct Table {
  std::string file;   // file name inside the output directory
  std::string csv;
};

struct ExperimentSpec {
  std::string name;           // config section
  std::string kind;           // which experiment to run
  std::uint64_t seed = 0;
  std::size_t replications = 1;
  std::size_t threads = 0;    // 0 means hardware concurrency
  bool retry = true;          // rerun once with a fresh seed if a check fails
  std::vector<std::string> checks;   // subset to evaluate; empty means all
  Params params;              // kind-specific keys
};

struct ExperimentResult {
  std::string name;
  std::string kind;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> provenance;
  std::vector<Table> tables;

  bool passed() const;
  void note(std::string key, std::string value) {
    provenance.emplace_back(std::move(key), std::move(value));
  }
};

// Experiment kinds and their check names.
const std::vector<std::string>& experiment_kinds();
const std::vector<std::string>& check_names(const std::string& kind);
bool is_experiment_kind(const std::string& kind);

ExperimentResult run_mm1_oracle(const ExperimentSpec& spec);
ExperimentResult run_fig_fluid(const ExperimentSpec& spec);
ExperimentResult run_fig_diffusion(const ExperimentSpec& spec);
ExperimentResult run_fig_steady_sweep(const ExperimentSpec& spec);
ExperimentResult run_fig_topology_compare(const ExperimentSpec& spec);
ExperimentResult run_fig_load_effect(const ExperimentSpec& spec);
ExperimentResult run_counterexamples(const ExperimentSpec& spec);
ExperimentResult run_coupling_audit(const ExperimentSpec& spec);
ExperimentResult run_ordering(const ExperimentSpec& spec);

// Dispatches on spec.kind and applies the retry policy.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Builds and validates the spec for one section. The seed defaults to a
// value derived from the suite seed and the section name.
ExperimentSpec make_spec(const Config& config, const std::string& section,
                         const std::string& profile, std::uint64_t suite_seed);

struct SuiteReport {
  std::vector<ExperimentResult> results;
  std::size_t failed_checks() const;
  std::string summary_text() const;
  std::string checks_csv() const;
};

// Runs the experiments listed under [suite] and writes
// <out>/<experiment>_<table>.csv, <out>/summary.txt and <out>/checks.csv.
// Every name and key is validated before the first run starts.
SuiteReport run_all(const Config& config, const std::string& profile, const std::string& out_dir);

// Evaluates fn(0..count-1) on up to `threads` workers; results keep index
// order and the first exception (by index) is rethrown.
template <typename T>
std::vector<T> parallel_map(std::size_t count, std::size_t threads,
                            const std::function<T(std::size_t)>& fn);

std::size_t resolve_threads(std::size_t requested);

}  // namespace graphlb

#include "core/parallel.inl"
