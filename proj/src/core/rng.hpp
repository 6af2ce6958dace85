#pragma once

#include <cstdint>
#include <random>

namespace graphlb {

// Well-known sub-stream ids. A generator or simulation run always draws from
// its own stream so that graph construction and event sampling never share
// state.
enum class Stream : std::uint64_t {
  kGraph = 1,
  kPositions = 2,
  kSimulation = 3,
  kCoupling = 4,
  kHeuristic = 5,
  kExperiment = 6,
};

// SplitMix64 finalizer; used only to derive independent engine seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

// Seed for sub-stream `stream` (and optional index) under a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t index = 0) noexcept;

// mt19937_64 with explicit conversions to doubles and bounded integers so
// that draws are identical across standard libraries (the std
// distributions are implementation-defined).
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
      : engine_(derive_seed(seed, static_cast<std::uint64_t>(stream), index)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer on [0, bound); bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  // Exponential variate with the given rate (> 0).
  double exponential(double rate);

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphlb
