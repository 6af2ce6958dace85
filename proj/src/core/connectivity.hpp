#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "core/graph.hpp"

namespace graphlb {

// Fluid scale thresholds subsets at ceil(eps N); diffusion at ceil(eps sqrt N).
enum class Scale { kFluid, kDiffusion };

enum class DisMethod {
  kExhaustive,
  kGreedy,
  kSampled,
  // Exact zero: no vertex has ceil-threshold many non-neighbors, so every
  // subset of that size is dominating.
  kDegreeCertificate,
};

std::string_view scale_name(Scale s);
std::optional<Scale> parse_scale(std::string_view name);
std::string_view method_name(DisMethod m);

struct DisReport {
  double epsilon = 0.0;
  Scale scale = Scale::kFluid;
  std::size_t value = 0;
  bool lower_bound = false;   // true when `value` is only a lower bound
  std::vector<Vertex> witness;
  DisMethod method = DisMethod::kExhaustive;
  std::size_t threshold_size = 0;
};

// |V \ N[U]|. U must be nonempty with valid ids.
std::size_t com(const Graph& g, std::span<const Vertex> u_set);

std::size_t threshold_size(std::size_t n, double epsilon, Scale scale);

// Number of k-subsets of an n-set, saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 10'000'000;

// Exact maximum of com over subsets of size threshold_size (com is set
// monotone, so larger subsets never do better). Witness is the
// lexicographically first maximizer. Throws kBudgetExceeded when the number
// of subsets is above `budget`.
DisReport dis_exact(const Graph& g, double epsilon, Scale scale,
                    std::uint64_t budget = kDefaultEnumerationBudget);

// Lower bound from a min-coverage greedy pass plus `effort` random subsets.
DisReport dis_heuristic(const Graph& g, double epsilon, Scale scale,
                        std::size_t effort, std::uint64_t seed);

enum class Verdict { kSufficientMet, kNecessaryViolated, kInconclusive };
std::string_view verdict_name(Verdict v);

struct AuditOptions {
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::size_t effort = 1000;
  std::uint64_t seed = 0;
  // Degree cutoff M and the fraction of vertices with degree <= M above
  // which the bounded-degree pattern is reported as present.
  std::size_t bounded_degree = 10;
  double bounded_fraction = 0.1;
};

struct AuditReport {
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t min_degree = 0;
  std::vector<std::size_t> degree_histogram;           // index = degree
  std::vector<std::size_t> at_most_degree;             // index M-1 for M=1..10
  std::vector<DisReport> fluid;
  std::vector<DisReport> diffusion;
  Verdict fluid_criterion = Verdict::kInconclusive;
  Verdict diffusion_criterion = Verdict::kInconclusive;
  Verdict bounded_degree_criterion = Verdict::kInconclusive;
  Verdict overall = Verdict::kInconclusive;

  // "key: value" lines.
  std::string to_text() const;
};

// Finite-N diagnostics for the well-connectedness criteria. Never claims
// asymptotic optimality; a met sufficient condition means every tested
// dis value is exactly zero at this N.
AuditReport optimality_audit(const Graph& g, std::span<const double> epsilons,
                             const AuditOptions& options = {});

}  // namespace graphlb
