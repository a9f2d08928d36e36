#include <doctest.h>

#include <cmath>
#include <set>

#include "netda/errors.hpp"
#include "netda/graph.hpp"
#include "netda/graph_measures.hpp"
#include "oracles.hpp"

using namespace netda;

namespace {

Graph star(NodeId leaves) {
  GraphBuilder gb(leaves + 1, false);
  for (NodeId v = 1; v <= leaves; ++v) gb.add_edge(0, v, 1.0);
  return gb.build();
}

Graph complete(NodeId n) {
  GraphBuilder gb(n, false);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = i + 1; j < n; ++j) gb.add_edge(i, j, 1.0);
  return gb.build();
}

}  // namespace

TEST_CASE("builder invariants") {
  GraphBuilder gb(4, false);
  CHECK_THROWS_AS(gb.add_edge(0, 0, 1.0), contract_violation);
  CHECK_THROWS_AS(gb.add_edge(0, 7, 1.0), contract_violation);
  CHECK_THROWS_AS(gb.add_edge(0, 1, std::nan("")), contract_violation);

  gb.add_edge(0, 1, 2.0);
  gb.add_edge(1, 0, 3.0);  // same unordered pair, weights accumulate
  gb.add_edge(2, 3, 5.0);
  gb.add_edge(2, 3, -5.0);  // cancels to zero, dropped
  const Graph g = gb.build();
  CHECK(g.edge_count() == 1);
  CHECK(g.weight(0, 1) == 5.0);
  CHECK(g.weight(1, 0) == 5.0);
  CHECK(g.weight(2, 3) == 0.0);
}

TEST_CASE("degree") {
  const Graph empty5 = GraphBuilder(5, false).build();
  CHECK(degree(empty5, 0) == 0.0);

  CHECK(degree(star(4), 0) == 4.0);
  CHECK(degree(star(4), 1) == 1.0);
  CHECK_THROWS_AS(degree(star(4), 9), contract_violation);

  // Random weighted graph against a direct edge-list summation.
  Rng rng(11);
  const Graph g = test::random_graph(30, 0.2, rng, false, true);
  std::vector<double> expect(30, 0.0);
  for (const Edge& e : g.edges()) {
    expect[static_cast<std::size_t>(e.u)] += std::abs(e.w);
    expect[static_cast<std::size_t>(e.v)] += std::abs(e.w);
  }
  for (NodeId v = 0; v < 30; ++v)
    CHECK(degree(g, v) == doctest::Approx(expect[static_cast<std::size_t>(v)]));

  // Degree sum = 2 * sum|w| on undirected graphs.
  double dsum = 0.0, wsum = 0.0;
  for (NodeId v = 0; v < 30; ++v) dsum += degree(g, v);
  for (const Edge& e : g.edges()) wsum += std::abs(e.w);
  CHECK(dsum == doctest::Approx(2.0 * wsum));
}

TEST_CASE("betweenness examples") {
  // Path 0-1-2: middle node carries the single pair.
  GraphBuilder gb(3, false);
  gb.add_edge(0, 1, 1.0);
  gb.add_edge(1, 2, 1.0);
  const auto p3 = betweenness(gb.build());
  CHECK(p3[1] == doctest::Approx(1.0));
  CHECK(p3[0] == doctest::Approx(0.0));

  const auto k5 = betweenness(complete(5));
  for (double c : k5) CHECK(c == doctest::Approx(0.0));

  const auto s4 = betweenness(star(4));
  CHECK(s4[0] == doctest::Approx(6.0));  // C(4,2) leaf pairs via center
}

TEST_CASE("betweenness matches pairwise path-counting oracle") {
  Rng rng(7);
  for (int rep = 0; rep < 25; ++rep) {
    const NodeId n = static_cast<NodeId>(rng.uniform_int(2, 50));
    const double p = 0.05 + 0.25 * rng.uniform01();
    const bool directed = rep % 3 == 0;
    const Graph g = test::random_graph(n, p, rng, directed);
    const auto got = betweenness(g);
    const auto want = test::betweenness_oracle(g);
    for (std::size_t v = 0; v < got.size(); ++v)
      CHECK(got[v] == doctest::Approx(want[v]).epsilon(1e-9));
  }
}

TEST_CASE("overlap") {
  GraphBuilder a(4, false), b(4, false);
  a.add_edge(0, 1, 2.0);
  b.add_edge(2, 3, 3.0);
  const TemporalNetwork tn({a.build(), b.build()});

  const Graph single = overlap(tn, 1, 1);
  CHECK(single.edge_count() == 1);
  CHECK(single.weight(2, 3) == 3.0);

  const Graph both = overlap(tn, 0, 1);
  CHECK(both.edge_count() == 2);
  CHECK(both.weight(0, 1) == 2.0);
  CHECK(both.weight(2, 3) == 3.0);

  CHECK_THROWS_AS(overlap(tn, 1, 2), contract_violation);
  CHECK_THROWS_AS(overlap(tn, -1, 0), contract_violation);
}

TEST_CASE("overlap is associative over concatenated ranges") {
  Rng rng(23);
  std::vector<Graph> snaps;
  for (int t = 0; t < 6; ++t)
    snaps.push_back(test::random_graph(15, 0.2, rng, false, true));
  const TemporalNetwork tn(std::move(snaps));

  const Graph whole = overlap(tn, 0, 5);
  const Graph left = overlap(tn, 0, 2);
  const Graph right = overlap(tn, 3, 5);
  for (NodeId i = 0; i < 15; ++i)
    for (NodeId j = i + 1; j < 15; ++j)
      CHECK(whole.weight(i, j) ==
            doctest::Approx(left.weight(i, j) + right.weight(i, j)));
}

TEST_CASE("graph density") {
  CHECK(graph_density(complete(4)) == doctest::Approx(1.0));
  CHECK(graph_density(GraphBuilder(6, false).build()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(graph_density(GraphBuilder(1, false).build()), config_error);

  GraphBuilder gd(3, true);
  gd.add_edge(0, 1, 1.0);
  CHECK(graph_density(gd.build()) == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("directed CSR exposes in and out arcs") {
  GraphBuilder gb(3, true);
  gb.add_edge(0, 1, 1.5);
  gb.add_edge(2, 1, 2.5);
  const Graph g = gb.build();
  CHECK(g.out(0).size() == 1);
  CHECK(g.out(1).size() == 0);
  CHECK(g.in(1).size() == 2);
  CHECK(g.weight(0, 1) == 1.5);
  CHECK(g.weight(1, 0) == 0.0);
}

TEST_CASE("temporal network validation") {
  const Graph a = GraphBuilder(3, false).build();
  const Graph b = GraphBuilder(4, false).build();
  CHECK_THROWS_AS(TemporalNetwork({a, b}), shape_error);
  CHECK_THROWS_AS(TemporalNetwork({}), config_error);
}
