#include <doctest.h>

#include <set>
#include <sstream>

#include "netda/contact_data.hpp"
#include "netda/errors.hpp"
#include "netda/graph_measures.hpp"

using namespace netda;

namespace {

ContactLog parse(const std::string& text) {
  std::istringstream in(text);
  return parse_contact_log(in);
}

std::set<std::pair<NodeId, NodeId>> pair_set(const Graph& g) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const Edge& e : g.edges()) s.insert({e.u, e.v});
  return s;
}

}  // namespace

TEST_CASE("parse_contact_log") {
  const ContactLog log = parse("10 A B\n20 B C\n");
  CHECK(log.n() == 3);
  CHECK(log.records.size() == 2);
  CHECK(log.id_names[0] == "A");

  CHECK_THROWS_AS(parse("10 A A\n"), parse_error);
  CHECK_THROWS_AS(parse("10 A\n"), parse_error);
  CHECK_THROWS_AS(parse(""), parse_error);
  CHECK_THROWS_AS(parse("# only comments\n\n"), parse_error);

  // Comments and extra fields are skipped/ignored; records end up sorted by
  // tick regardless of input order.
  const ContactLog messy = parse("# header\n30 C D extra stuff\n10 A B\n");
  CHECK(messy.records.front().tick == 10);
  CHECK(messy.records.back().tick == 30);
  CHECK(messy.n() == 4);
}

TEST_CASE("condense windows over distinct ticks") {
  {
    const TemporalNetwork tn = condense(parse("5 A B\n"), 100);
    CHECK(tn.size() == 1);
    CHECK(tn.at(0).weight(0, 1) == 1.0);
  }
  {
    // Two contacts of the same pair in one window aggregate to weight 2.
    const TemporalNetwork tn = condense(parse("5 A B\n6 A B\n"), 100);
    CHECK(tn.size() == 1);
    CHECK(tn.at(0).weight(0, 1) == 2.0);
  }
  {
    // 7 distinct ticks, window 3 -> ceil(7/3) = 3 snapshots.
    std::string text;
    for (int t = 0; t < 7; ++t)
      text += std::to_string(t * 10) + " A B\n";
    const TemporalNetwork tn = condense(parse(text), 3);
    CHECK(tn.size() == 3);
    CHECK(tn.at(0).weight(0, 1) == 3.0);
    CHECK(tn.at(2).weight(0, 1) == 1.0);
  }
  CHECK_THROWS_AS(condense(parse("1 A B\n"), 0), config_error);
}

TEST_CASE("condense then overlap reproduces the raw pair set") {
  // Random-ish log over 40 people, 500 records.
  std::string text;
  std::set<std::pair<int, int>> raw_pairs;
  std::uint64_t state = 99;
  auto next = [&] { return state = splitmix64(state); };
  for (int r = 0; r < 500; ++r) {
    const int t = static_cast<int>(next() % 200);
    int i = static_cast<int>(next() % 40);
    int j = static_cast<int>(next() % 40);
    if (i == j) j = (j + 1) % 40;
    text += std::to_string(t) + " p" + std::to_string(i) + " p" +
            std::to_string(j) + "\n";
  }
  const ContactLog log = parse(text);
  for (const ContactRecord& r : log.records)
    raw_pairs.insert({std::min(r.i, r.j), std::max(r.i, r.j)});

  const TemporalNetwork tn = condense(log, 7);
  const Graph all = overlap(tn, 0, tn.size() - 1);
  CHECK(pair_set(all).size() == raw_pairs.size());
  for (const Edge& e : all.edges())
    CHECK(raw_pairs.count({std::min(e.u, e.v), std::max(e.u, e.v)}) == 1);
}

TEST_CASE("apply_mask") {
  Rng dummy(1);
  std::vector<Graph> snaps;
  for (int t = 0; t < 4; ++t) {
    GraphBuilder gb(10, false);
    gb.add_edge(0, 1, 1.0);
    gb.add_edge(2, 3, 1.0);
    gb.add_edge(4, 5, 1.0);
    snaps.push_back(gb.build());
  }
  const TemporalNetwork tn(std::move(snaps));

  ObservationMask mask;
  mask.fraction = 0.0;
  mask.seed = 5;
  const TemporalNetwork same = apply_mask(tn, mask);
  for (int t = 0; t < 4; ++t)
    CHECK(same.at(t).edge_count() == tn.at(t).edge_count());

  mask.fraction = 1.0;
  const TemporalNetwork gone = apply_mask(tn, mask);
  for (int t = 0; t < 4; ++t) CHECK(gone.at(t).edge_count() == 0);

  mask.fraction = 1.5;
  CHECK_THROWS_AS(apply_mask(tn, mask), config_error);

  // Static mode hides the same nodes at every step; masked edges are a
  // subset of the originals.
  mask.fraction = 0.5;
  const auto h0 = hidden_nodes(mask, 10, 0);
  const auto h3 = hidden_nodes(mask, 10, 3);
  CHECK(h0 == h3);
  CHECK(h0.size() == 5);
  const TemporalNetwork masked = apply_mask(tn, mask);
  for (int t = 0; t < 4; ++t)
    for (const Edge& e : masked.at(t).edges())
      CHECK(tn.at(t).weight(e.u, e.v) == e.w);
}

TEST_CASE("mask size uses round-half-up") {
  ObservationMask mask;
  mask.fraction = 0.5;
  mask.seed = 99;
  CHECK(hidden_nodes(mask, 329, 0).size() == 165);  // 164.5 rounds up
  mask.fraction = 0.1;
  CHECK(hidden_nodes(mask, 329, 0).size() == 33);  // 32.9 rounds up
}

TEST_CASE("per-step mask redraws per snapshot") {
  ObservationMask mask;
  mask.mode = ObservationMask::Mode::per_step;
  mask.fraction = 0.4;
  mask.seed = 31;
  const auto h0 = hidden_nodes(mask, 50, 0);
  const auto h1 = hidden_nodes(mask, 50, 1);
  CHECK(h0.size() == h1.size());
  CHECK(h0 != h1);  // astronomically unlikely to collide
}

TEST_CASE("subnetwork_observations") {
  GraphBuilder gb(6, false);
  gb.add_edge(0, 1, 1.0);  // intra block 0
  gb.add_edge(2, 3, 2.0);  // intra block 1
  gb.add_edge(1, 2, 3.0);  // inter
  gb.add_edge(4, 5, 4.0);  // outside any block
  const TemporalNetwork tn({gb.build()});

  const std::vector<std::vector<NodeId>> blocks = {{0, 1}, {2, 3}};
  const auto obs = subnetwork_observations(tn, blocks);
  REQUIRE(obs.size() == 1);
  CHECK(obs[0].size() == 2);
  for (const Edge& e : obs[0]) {
    const bool b0 = (e.u == 0 && e.v == 1);
    const bool b1 = (e.u == 2 && e.v == 3);
    CHECK((b0 || b1));
  }

  // One block with every node observes all edges; singletons observe none.
  const auto all = subnetwork_observations(tn, {{0, 1, 2, 3, 4, 5}});
  CHECK(all[0].size() == tn.at(0).edge_count());
  const auto none = subnetwork_observations(tn, {{0}, {1}, {2}});
  CHECK(none[0].empty());

  CHECK_THROWS_AS(subnetwork_observations(tn, {{0, 1}, {1, 2}}), config_error);
}

TEST_CASE("synthetic fallback matches the target shape") {
  SyntheticSchoolConfig cfg;
  cfg.steps = 20;
  const TemporalNetwork tn = synthetic_school_network(cfg);
  CHECK(tn.n() == 329);
  CHECK(tn.size() == 20);
  double mean_density = 0.0;
  for (int t = 0; t < tn.size(); ++t) mean_density += graph_density(tn.at(t));
  mean_density /= tn.size();
  CHECK(mean_density == doctest::Approx(0.0076).epsilon(0.25));

  // Deterministic for a fixed seed.
  const TemporalNetwork tn2 = synthetic_school_network(cfg);
  for (int t = 0; t < tn.size(); ++t) {
    REQUIRE(tn2.at(t).edge_count() == tn.at(t).edge_count());
    for (const Edge& e : tn.at(t).edges())
      CHECK(tn2.at(t).weight(e.u, e.v) == e.w);
  }
}

TEST_CASE("snapshot dump format") {
  GraphBuilder gb(3, false);
  gb.add_edge(0, 2, 2.0);
  const TemporalNetwork tn({gb.build()});
  std::ostringstream out;
  dump_snapshots_csv(out, tn);
  CHECK(out.str() == "step,i,j,w\n0,0,2,2\n");
}
