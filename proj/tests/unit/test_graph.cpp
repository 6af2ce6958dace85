#include <string>

#include "core/error.hpp"
#include "core/generators.hpp"
#include "core/graph.hpp"
#include "doctest.h"

using namespace graphlb;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInternal;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("from_edges symmetrizes and sorts") {
  const Graph g = Graph::from_edges(4, {{2, 0}, {0, 1}, {3, 0}}, "t");
  CHECK(g.vertex_count() == 4);
  CHECK(g.edge_count() == 3);
  const auto nb = g.neighbors(0);
  CHECK(std::vector<Vertex>(nb.begin(), nb.end()) == std::vector<Vertex>{1, 2, 3});
  CHECK(g.degree(2) == 1);
  CHECK(g.adjacent(2, 0));
  CHECK_FALSE(g.adjacent(1, 2));
  CHECK(g.validate().empty());
  CHECK(g.min_degree() == 1);
  CHECK(g.max_degree() == 3);
  CHECK(g.mean_degree() == doctest::Approx(1.5));
}

TEST_CASE("from_edges rejects loops, repeats and bad ids") {
  CHECK(code_of([] { Graph::from_edges(3, {{1, 1}}, "t"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Graph::from_edges(3, {{0, 1}, {1, 0}}, "t"); }) == ErrorCode::kInvalidArgument);
  CHECK(code_of([] { Graph::from_edges(3, {{0, 3}}, "t"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("closed neighborhoods") {
  CHECK(closed_neighborhood(gen_clique(4), 0) == std::vector<Vertex>{0, 1, 2, 3});
  CHECK(closed_neighborhood(gen_ring(5), 0) == std::vector<Vertex>{0, 1, 4});
  CHECK(closed_neighborhood(gen_isolated(7), 3) == std::vector<Vertex>{3});
}

TEST_CASE("edge list loading") {
  const Graph g = load_edge_list("3 1\n0 1\n");
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 1);
  CHECK(g.adjacent(0, 1));
  CHECK(g.degree(2) == 0);
  CHECK(load_edge_list("3 1\n0 1").edge_count() == 1);
  CHECK(load_edge_list("3 1\n0 1\n\n\n").edge_count() == 1);
  CHECK(load_edge_list("5 0\n").vertex_count() == 5);
}

TEST_CASE("edge list errors") {
  CHECK(code_of([] { load_edge_list("2 1\n0 0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 2\n0 1\n1 0\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 1\n0 3\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 1\n0 x\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 1\n0 1 2\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 2\n0 1\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 1\n0 1\n1 2\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list(""); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list("3 1\n-1 2\n"); }) == ErrorCode::kParse);
  CHECK(code_of([] { load_edge_list_file("/nonexistent/graph.el"); }) == ErrorCode::kIo);
}

TEST_CASE("error messages carry the line number") {
  try {
    load_edge_list("4 2\n0 1\n2 2\n");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("save is canonical and round-trips") {
  const Graph g = load_edge_list("4 3\n3 1\n0 2\n2 1\n");
  CHECK(save_edge_list(g) == "4 3\n0 2\n1 2\n1 3\n");
  CHECK(load_edge_list(save_edge_list(g)) == g);
  const Graph r = gen_erdos_renyi(60, 0.1, 5);
  CHECK(load_edge_list(save_edge_list(r)) == r);
  CHECK(save_edge_list(load_edge_list(save_edge_list(r))) == save_edge_list(r));
}

TEST_CASE("fingerprint depends on the edge set only") {
  const Graph a = load_edge_list("4 3\n3 1\n0 2\n2 1\n");
  const Graph b = load_edge_list("4 3\n1 2\n1 3\n2 0\n");
  const Graph c = load_edge_list("4 3\n1 2\n1 3\n3 0\n");
  CHECK(a.fingerprint() == b.fingerprint());
  CHECK(a.fingerprint() != c.fingerprint());
}

}
