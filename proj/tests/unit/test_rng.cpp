#include <cmath>
#include <set>

#include "core/rng.hpp"
#include "doctest.h"
#include "stats.hpp"

using namespace graphlb;

TEST_SUITE("rng") {

TEST_CASE("sub-stream seeds are distinct and reproducible") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t stream = 1; stream <= 6; ++stream)
    for (std::uint64_t index = 0; index < 50; ++index) seen.insert(derive_seed(42, stream, index));
  CHECK(seen.size() == 300);
  CHECK(derive_seed(42, 3, 7) == derive_seed(42, 3, 7));
  CHECK(derive_seed(42, 3, 7) != derive_seed(43, 3, 7));
}

TEST_CASE("same seed gives the same sequence") {
  Rng a(9, Stream::kSimulation), b(9, Stream::kSimulation), c(9, Stream::kGraph);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
}

TEST_CASE("uniform lies in [0,1) with mean one half") {
  Rng rng(1);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("below is unbiased") {
  Rng rng(2);
  CHECK(rng.below(1) == 0);
  std::vector<std::uint64_t> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto v = rng.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  CHECK(testing::chi_square_uniform(counts) < testing::chi_square_critical(6));
}

TEST_CASE("exponential has mean one over the rate") {
  Rng rng(3);
  const int n = 200000;
  const double rate = 2.5;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.exponential(rate);
    REQUIRE(x >= 0.0);
    sum += x;
  }
  CHECK(std::abs(sum / n - 1.0 / rate) < 4.0 * (1.0 / rate) / std::sqrt(n));
}

}
