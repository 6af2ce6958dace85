#include "core/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace graphlb {

std::string_view scale_name(Scale s) {
  return s == Scale::kFluid ? "fluid" : "diffusion";
}

std::optional<Scale> parse_scale(std::string_view name) {
  if (name == "fluid") return Scale::kFluid;
  if (name == "diffusion") return Scale::kDiffusion;
  return std::nullopt;
}

std::string_view method_name(DisMethod m) {
  switch (m) {
    case DisMethod::kExhaustive: return "exhaustive";
    case DisMethod::kGreedy: return "greedy";
    case DisMethod::kSampled: return "sampled";
    case DisMethod::kDegreeCertificate: return "degree_certificate";
  }
  return "unknown";
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kSufficientMet: return "sufficient-condition-met";
    case Verdict::kNecessaryViolated: return "necessary-condition-violated";
    case Verdict::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

std::size_t com(const Graph& g, std::span<const Vertex> u_set) {
  require(!u_set.empty(), "com needs a nonempty vertex set");
  const std::size_t n = g.vertex_count();
  std::vector<char> covered(n, 0);
  std::size_t count = 0;
  auto cover = [&](Vertex w) {
    if (!covered[w]) {
      covered[w] = 1;
      ++count;
    }
  };
  for (Vertex u : u_set) {
    require(u < n, "vertex id " + std::to_string(u) + " out of range");
    cover(u);
    for (Vertex w : g.neighbors(u)) cover(w);
  }
  return n - count;
}

std::size_t threshold_size(std::size_t n, double epsilon, Scale scale) {
  require(epsilon > 0.0, "epsilon must be positive");
  const double base = scale == Scale::kFluid ? static_cast<double>(n)
                                             : std::sqrt(static_cast<double>(n));
  const double raw = epsilon * base;
  return static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 result = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 1; i <= k; ++i) {
    result = result * (n - k + i) / i;
    if (result > kMax) return kMax;
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

using Words = std::vector<std::uint64_t>;

std::vector<Words> closed_masks(const Graph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t words = (n + 63) / 64;
  std::vector<Words> masks(n, Words(words, 0));
  for (Vertex v = 0; v < n; ++v) {
    masks[v][v / 64] |= std::uint64_t{1} << (v % 64);
    for (Vertex u : g.neighbors(v)) masks[v][u / 64] |= std::uint64_t{1} << (u % 64);
  }
  return masks;
}

std::size_t checked_threshold(const Graph& g, double epsilon, Scale scale) {
  const std::size_t k = threshold_size(g.vertex_count(), epsilon, scale);
  require(k >= 1, "threshold size must be at least one");
  require(k <= g.vertex_count(), "threshold size exceeds the vertex count");
  return k;
}

}  // namespace

DisReport dis_exact(const Graph& g, double epsilon, Scale scale, std::uint64_t budget) {
  const std::size_t n = g.vertex_count();
  const std::size_t k = checked_threshold(g, epsilon, scale);
  const std::uint64_t subsets = binomial_saturating(n, k);
  if (subsets > budget) {
    fail(ErrorCode::kBudgetExceeded,
         "C(" + std::to_string(n) + "," + std::to_string(k) + ") subsets exceed the "
         "enumeration budget of " + std::to_string(budget) + "; use dis_heuristic");
  }

  const auto masks = closed_masks(g);
  const std::size_t words = masks.empty() ? 0 : masks[0].size();
  std::vector<Vertex> pick(k);
  std::iota(pick.begin(), pick.end(), Vertex{0});
  // prefix[j] is the union of the masks of pick[0..j).
  std::vector<Words> prefix(k + 1, Words(words, 0));
  std::size_t dirty = 0;

  DisReport report;
  report.epsilon = epsilon;
  report.scale = scale;
  report.threshold_size = k;
  report.method = DisMethod::kExhaustive;
  bool have = false;

  while (true) {
    for (std::size_t j = dirty; j < k; ++j) {
      for (std::size_t w = 0; w < words; ++w) prefix[j + 1][w] = prefix[j][w] | masks[pick[j]][w];
    }
    std::size_t covered = 0;
    for (std::size_t w = 0; w < words; ++w) covered += std::popcount(prefix[k][w]);
    const std::size_t value = n - covered;
    if (!have || value > report.value) {
      have = true;
      report.value = value;
      report.witness = pick;
    }
    // Advance to the next combination in lexicographic order.
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
    dirty = i - 1;
  }
  return report;
}

DisReport dis_heuristic(const Graph& g, double epsilon, Scale scale, std::size_t effort,
                        std::uint64_t seed) {
  const std::size_t n = g.vertex_count();
  const std::size_t k = checked_threshold(g, epsilon, scale);

  DisReport report;
  report.epsilon = epsilon;
  report.scale = scale;
  report.threshold_size = k;
  report.lower_bound = true;

  // Greedy: repeatedly add the vertex whose closed neighborhood covers the
  // fewest still-uncovered vertices. gain[u] tracks that count.
  {
    std::vector<std::size_t> gain(n);
    for (Vertex v = 0; v < n; ++v) gain[v] = g.degree(v) + 1;
    std::vector<char> covered(n, 0);
    std::vector<char> chosen(n, 0);
    std::size_t covered_count = 0;
    std::vector<Vertex> picks;
    picks.reserve(k);
    auto cover = [&](Vertex w) {
      if (covered[w]) return;
      covered[w] = 1;
      ++covered_count;
      --gain[w];
      for (Vertex u : g.neighbors(w)) --gain[u];
    };
    for (std::size_t step = 0; step < k; ++step) {
      Vertex best = 0;
      std::size_t best_gain = std::numeric_limits<std::size_t>::max();
      for (Vertex v = 0; v < n; ++v) {
        if (!chosen[v] && gain[v] < best_gain) {
          best_gain = gain[v];
          best = v;
        }
      }
      chosen[best] = 1;
      picks.push_back(best);
      cover(best);
      for (Vertex u : g.neighbors(best)) cover(u);
    }
    std::sort(picks.begin(), picks.end());
    report.value = n - covered_count;
    report.witness = std::move(picks);
    report.method = DisMethod::kGreedy;
  }

  // Random k-subsets via a persistent partial Fisher-Yates shuffle.
  Rng rng(seed, Stream::kHeuristic);
  std::vector<Vertex> perm(n);
  std::iota(perm.begin(), perm.end(), Vertex{0});
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t round = 0;
  for (std::size_t trial = 0; trial < effort; ++trial) {
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
      std::swap(perm[i], perm[j]);
    }
    ++round;
    std::size_t covered = 0;
    auto cover = [&](Vertex w) {
      if (stamp[w] != round) {
        stamp[w] = round;
        ++covered;
      }
    };
    for (std::size_t i = 0; i < k; ++i) {
      cover(perm[i]);
      for (Vertex u : g.neighbors(perm[i])) cover(u);
    }
    if (n - covered > report.value) {
      report.value = n - covered;
      report.witness.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(report.witness.begin(), report.witness.end());
      report.method = DisMethod::kSampled;
    }
  }
  return report;
}

namespace {

DisReport audit_dis(const Graph& g, double epsilon, Scale scale, const AuditOptions& opt,
                    std::uint64_t stream_index) {
  const std::size_t n = g.vertex_count();
  const std::size_t k = threshold_size(n, epsilon, scale);
  if (k >= 1 && k <= n && n - 1 - g.min_degree() < k) {
    DisReport r;
    r.epsilon = epsilon;
    r.scale = scale;
    r.threshold_size = k;
    r.value = 0;
    r.method = DisMethod::kDegreeCertificate;
    r.witness.resize(k);
    std::iota(r.witness.begin(), r.witness.end(), Vertex{0});
    return r;
  }
  if (k >= 1 && k <= n && binomial_saturating(n, k) <= opt.budget) {
    return dis_exact(g, epsilon, scale, opt.budget);
  }
  return dis_heuristic(g, epsilon, scale, opt.effort, derive_seed(opt.seed, 0, stream_index));
}

Verdict zero_verdict(const std::vector<DisReport>& reports) {
  if (reports.empty()) return Verdict::kInconclusive;
  for (const auto& r : reports) {
    if (r.lower_bound || r.value != 0) return Verdict::kInconclusive;
  }
  return Verdict::kSufficientMet;
}

}  // namespace

AuditReport optimality_audit(const Graph& g, std::span<const double> epsilons,
                             const AuditOptions& options) {
  AuditReport a;
  a.n = g.vertex_count();
  a.edges = g.edge_count();
  a.min_degree = g.min_degree();
  a.degree_histogram.assign(g.max_degree() + 1, 0);
  for (Vertex v = 0; v < a.n; ++v) ++a.degree_histogram[g.degree(v)];
  a.at_most_degree.assign(10, 0);
  for (std::size_t m = 1; m <= 10; ++m) {
    std::size_t count = 0;
    for (std::size_t d = 0; d <= m && d < a.degree_histogram.size(); ++d) {
      count += a.degree_histogram[d];
    }
    a.at_most_degree[m - 1] = count;
  }

  std::uint64_t index = 0;
  for (double eps : epsilons) {
    a.fluid.push_back(audit_dis(g, eps, Scale::kFluid, options, index++));
    a.diffusion.push_back(audit_dis(g, eps, Scale::kDiffusion, options, index++));
  }
  a.fluid_criterion = zero_verdict(a.fluid);
  a.diffusion_criterion = zero_verdict(a.diffusion);

  std::size_t bounded = 0;
  for (std::size_t d = 0; d <= options.bounded_degree && d < a.degree_histogram.size(); ++d) {
    bounded += a.degree_histogram[d];
  }
  a.bounded_degree_criterion =
      a.n > 0 && static_cast<double>(bounded) >= options.bounded_fraction * static_cast<double>(a.n)
          ? Verdict::kNecessaryViolated
          : Verdict::kInconclusive;

  if (a.bounded_degree_criterion == Verdict::kNecessaryViolated) {
    a.overall = Verdict::kNecessaryViolated;
  } else if (a.fluid_criterion == Verdict::kSufficientMet) {
    a.overall = Verdict::kSufficientMet;
  } else {
    a.overall = Verdict::kInconclusive;
  }
  return a;
}

std::string AuditReport::to_text() const {
  std::ostringstream os;
  os << "n: " << n << "\n";
  os << "edges: " << edges << "\n";
  os << "min_degree: " << min_degree << "\n";
  os << "degree_histogram:";
  for (std::size_t d = 0; d < degree_histogram.size(); ++d) {
    if (degree_histogram[d] != 0) os << " " << d << "=" << degree_histogram[d];
  }
  os << "\n";
  for (std::size_t m = 1; m <= at_most_degree.size(); ++m) {
    os << "degree_at_most_" << m << ": " << at_most_degree[m - 1] << "\n";
  }
  auto emit = [&os](const DisReport& r) {
    os << (r.scale == Scale::kFluid ? "dis1" : "dis2") << "[eps=" << r.epsilon << "]: "
       << (r.lower_bound ? ">=" : "") << r.value << " (k=" << r.threshold_size
       << ", method=" << method_name(r.method) << ")\n";
  };
  for (const auto& r : fluid) emit(r);
  for (const auto& r : diffusion) emit(r);
  os << "fluid_criterion: " << verdict_name(fluid_criterion) << "\n";
  os << "diffusion_criterion: " << verdict_name(diffusion_criterion) << "\n";
  os << "bounded_degree_criterion: " << verdict_name(bounded_degree_criterion) << "\n";
  os << "verdict: " << verdict_name(overall) << "\n";
  return os.str();
}

}  // namespace graphlb
