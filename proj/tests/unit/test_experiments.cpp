#include <atomic>
#include <filesystem>
#include <stdexcept>

#include "core/config.hpp"
#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/experiments.hpp"
#include "doctest.h"

using namespace graphlb;
namespace fs = std::filesystem;

namespace {

const char* kTiny =
    "[suite]\n"
    "experiments = mm\n"
    "seed = 5\n"
    "[mm]\n"
    "kind = mm1_oracle\n"
    "n = 20\n"
    "horizon = 400\n"
    "warmup = 100\n";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("graphlb_exp_" + name);
  fs::remove_all(p);
  return p;
}

ErrorCode error_of(const std::string& text, const std::string& out) {
  try {
    run_all(Config::parse(text), "", out);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("make_check relations") {
  CHECK(make_check("a", 1.0, "<=", 1.0).pass);
  CHECK_FALSE(make_check("a", 1.0, "<", 1.0).pass);
  CHECK(make_check("a", 2.0, ">", 1.0).pass);
  CHECK(make_check("a", 1.0, ">=", 1.0).pass);
  CHECK_FALSE(make_check("a", std::nan(""), "<=", 1.0).pass);
}

TEST_CASE("parallel_map keeps order and propagates the first error") {
  const auto out = parallel_map<int>(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < 100; ++i) CHECK(out[i] == static_cast<int>(i * i));
  CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
  std::atomic<int> calls{0};
  try {
    parallel_map<int>(20, 3, [&](std::size_t i) -> int {
      ++calls;
      if (i == 7) throw std::runtime_error("seven");
      if (i == 12) throw std::runtime_error("twelve");
      return 0;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "seven");
  }
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("every kind is registered with checks") {
  CHECK(experiment_kinds().size() == 9);
  for (const auto& k : experiment_kinds()) {
    CHECK(is_experiment_kind(k));
    CHECK_FALSE(check_names(k).empty());
  }
  CHECK_FALSE(is_experiment_kind("fig_seven"));
}

TEST_CASE("empty suite writes an empty summary") {
  const auto out = scratch("empty");
  const SuiteReport r = run_all(Config::parse("[suite]\nexperiments =\n"), "", out.string());
  CHECK(r.results.empty());
  CHECK(r.failed_checks() == 0);
  CHECK(fs::exists(out / "summary.txt"));
  CHECK(read_text_file((out / "checks.csv").string()) == "experiment,check,measured,relation,tolerance,pass\n");
  fs::remove_all(out);
}

TEST_CASE("bad suites fail before any output") {
  const auto out = scratch("bad");
  CHECK(error_of("[suite]\nexperiments = nope\n", out.string()) == ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = mm1_oracle, mm1_oracle\n", out.string()) == ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = mm1_oracle\ncolour = red\n", out.string()) == ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = mm1_oracle\n[mm1_oracle]\nwidth = 3\n", out.string()) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = mm1_oracle\n[mm1_oracle]\nchecks = q9_oracle\n", out.string()) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = mm1_oracle\n[mm1_oracle]\nlambda = fast\n", out.string()) ==
        ErrorCode::kParse);
  CHECK(error_of("[suite]\nexperiments = a, b\n[a]\nkind = mm1_oracle\n[b]\nkind = fig_seven\n", out.string()) ==
        ErrorCode::kInvalidArgument);
  CHECK(error_of("[suite]\nexperiments = s\n[s]\nkind = fig_steady_sweep\nrules = 2, log\n", out.string()) ==
        ErrorCode::kInvalidArgument);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("unwritable output directory") {
  const auto base = scratch("file");
  fs::create_directories(base);
  write_text_file((base / "plain").string(), "x");
  CHECK(error_of(kTiny, (base / "plain" / "out").string()) == ErrorCode::kIo);
  fs::remove_all(base);
}

TEST_CASE("suite runs deterministically") {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const SuiteReport ra = run_all(Config::parse(kTiny), "", a.string());
  run_all(Config::parse(kTiny), "", b.string());
  REQUIRE(ra.results.size() == 1);
  CHECK(ra.results[0].checks.size() == 5);
  for (const char* f : {"summary.txt", "checks.csv"})
    CHECK(read_text_file((a / f).string()) == read_text_file((b / f).string()));
  for (const auto& t : ra.results[0].tables)
    CHECK(read_text_file((a / t.file).string()) == read_text_file((b / t.file).string()));
  const std::string summary = read_text_file((a / "summary.txt").string());
  CHECK(summary.find("== mm (mm1_oracle)") != std::string::npos);
  CHECK(summary.find("checks: ") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("profiles override keys and checks can be narrowed") {
  const Config c = Config::parse(std::string(kTiny) + "checks = q1_oracle\n[mm:ci]\nhorizon = 200\n");
  const ExperimentSpec spec = make_spec(c, "mm", "ci", 5);
  CHECK(spec.params.get_double("horizon", 0.0) == 200.0);
  CHECK(make_spec(c, "mm", "", 5).params.get_double("horizon", 0.0) == 400.0);
  CHECK(spec.seed == make_spec(c, "mm", "", 5).seed);
  CHECK(spec.seed != make_spec(c, "mm", "", 6).seed);
  const ExperimentResult r = run_experiment(spec);
  REQUIRE(r.checks.size() == 1);
  CHECK(r.checks[0].name == "q1_oracle");
}

TEST_CASE("a failing check triggers one retry that is recorded") {
  ExperimentSpec spec;
  spec.name = "mm";
  spec.kind = "mm1_oracle";
  spec.seed = 1;
  spec.params.set("n", "10");
  spec.params.set("horizon", "100");
  spec.params.set("warmup", "10");
  spec.params.set("band", "-1");   // |z| <= -1 cannot hold
  const ExperimentResult r = run_experiment(spec);
  CHECK_FALSE(r.passed());
  bool noted = false;
  for (const auto& [k, v] : r.provenance) noted |= k == "retry";
  CHECK(noted);
  spec.retry = false;
  const ExperimentResult s = run_experiment(spec);
  noted = false;
  for (const auto& [k, v] : s.provenance) noted |= k == "retry";
  CHECK_FALSE(noted);
}

}
