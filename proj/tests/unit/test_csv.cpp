#include <filesystem>
#include <sstream>

#include "core/coupling.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/fluid.hpp"
#include "core/generators.hpp"
#include "doctest.h"

using namespace graphlb;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_SUITE("csv") {

TEST_CASE("number formatting") {
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-2.25) == "-2.25");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

TEST_CASE("trace csv round trip") {
  SimConfig cfg;
  cfg.lambda = 0.9;
  cfg.horizon = 20.0;
  cfg.grid = 0.5;
  cfg.seed = 3;
  const Trace t = simulate(gen_ring(40), cfg);
  const std::string csv = trace_to_csv(t);
  const auto rows = lines(csv);
  REQUIRE(rows.size() == t.samples() + 1);
  CHECK(rows[0].rfind("t,q1,", 0) == 0);
  CHECK(rows[0].find("arrivals,departures,discards") != std::string::npos);
  for (const auto& r : rows) REQUIRE(columns(r) == columns(rows[0]));
  const Trace back = trace_from_csv(csv, 40);
  REQUIRE(back.samples() == t.samples());
  for (std::size_t s = 0; s < t.samples(); ++s) {
    REQUIRE(back.times[s] == t.times[s]);
    for (std::size_t i = 1; i <= t.levels(); ++i) REQUIRE(back.count(s, i) == t.count(s, i));
  }
  CHECK(trace_to_csv(t) == csv);
}

TEST_CASE("group columns appear only for grouped runs") {
  SimConfig cfg;
  cfg.horizon = 5.0;
  cfg.group = {0, 1};
  const Trace t = simulate(gen_ring(10), cfg);
  CHECK(lines(trace_to_csv(t))[0].find("group_q1") != std::string::npos);
  cfg.group.clear();
  CHECK(lines(trace_to_csv(simulate(gen_ring(10), cfg)))[0].find("group_q1") == std::string::npos);
}

TEST_CASE("coupled, fluid and diffusion tables") {
  SimConfig cfg;
  cfg.horizon = 10.0;
  cfg.grid = 1.0;
  const auto c = coupled_to_csv(simulate_coupled(gen_ring(20), cfg, 2));
  const auto crow = lines(c);
  CHECK(crow.size() == 12);
  CHECK(crow[0].find(",delta,bound_gap,iq1") != std::string::npos);

  const auto f = lines(fluid_to_csv(fluid_integrate({0.0, 0.0, 0.0}, 0.5, 1.0, 0.1, 0.5)));
  CHECK(f[0] == "t,q1,q2,q3");
  CHECK(f.size() == 4);
  CHECK(f[1] == "0,0,0,0");

  Trace t;
  t.n_servers = 100;
  t.times = {0.0};
  t.occupancy = {{90, 20}};
  t.arrivals = t.departures = t.discards = {0};
  const auto d = lines(diffusion_to_csv(diffusion_scale(t, 100, 90.0, 2)));
  CHECK(d[0] == "t,Qbar1,Qbar2");
  CHECK(d[1] == "0,-1,2");
}

TEST_CASE("malformed trace csv") {
  CHECK_THROWS_AS(trace_from_csv("", 10), Error);
  CHECK_THROWS_AS(trace_from_csv("x,y\n1,2\n", 10), Error);
  CHECK_THROWS_AS(trace_from_csv("t,q1\n0,abc\n", 10), Error);
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "graphlb_csv_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "a.txt").string();
  write_text_file(path, "hello\n");
  CHECK(read_text_file(path) == "hello\n");
  try {
    read_text_file((dir / "missing.txt").string());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kIo);
  }
  CHECK_THROWS_AS(write_text_file((dir / "a.txt" / "b").string(), "x"), Error);
  std::filesystem::remove_all(dir);
}

}
