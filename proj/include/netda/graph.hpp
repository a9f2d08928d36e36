#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace netda {

using NodeId = std::int32_t;

// Arc convention: a stored arc (u -> v) means contact can carry infection
// from u to v. In adjacency-matrix terms A[v][u] (receiver row, sender
// column), so the matrix-vector product in the infection model sums a
// node's infected in-neighbours, and the degree d(v) = sum_k |A[k][v]| is
// the weighted out-sum of v. For undirected graphs both arcs are stored and
// the two readings coincide.
struct Arc {
  NodeId to;
  double w;
};

struct Edge {
  NodeId u, v;
  double w;
};

// Sparse weighted graph, immutable after construction (CSR incidence).
// Only nonzero-weight edges are stored; at most one edge per ordered pair;
// no self-loops.
class Graph {
 public:
  Graph() = default;

  NodeId n() const { return n_; }
  bool directed() const { return directed_; }

  // Arcs leaving v, sorted by target.
  std::span<const Arc> out(NodeId v) const;
  // Arcs entering v (alias of out() for undirected graphs).
  std::span<const Arc> in(NodeId v) const;

  double weight(NodeId from, NodeId to) const;  // 0 if absent
  bool has_arc(NodeId from, NodeId to) const { return weight(from, to) != 0.0; }

  // Unique edges: unordered pairs (u < v) for undirected, arcs for directed.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  void check_node(NodeId v) const;

 private:
  friend class GraphBuilder;

  NodeId n_ = 0;
  bool directed_ = false;
  std::vector<std::size_t> out_offsets_;
  std::vector<Arc> out_arcs_;
  std::vector<std::size_t> in_offsets_;  // empty when undirected
  std::vector<Arc> in_arcs_;
  std::vector<Edge> edges_;
};

// Accumulating builder: duplicate (u, v) insertions sum their weights;
// pairs whose accumulated weight is exactly zero are dropped.
class GraphBuilder {
 public:
  GraphBuilder(NodeId n, bool directed);

  void add_edge(NodeId u, NodeId v, double w = 1.0);
  Graph build();

 private:
  NodeId n_;
  bool directed_;
  std::vector<Edge> pending_;
};

// Ordered sequence of snapshots over a fixed node set.
class TemporalNetwork {
 public:
  TemporalNetwork() = default;
  explicit TemporalNetwork(std::vector<Graph> snapshots,
                           std::vector<long long> step_labels = {});

  NodeId n() const;
  bool directed() const;
  int size() const { return static_cast<int>(snapshots_.size()); }
  const Graph& at(int t) const;
  const std::vector<Graph>& snapshots() const { return snapshots_; }
  const std::vector<long long>& step_labels() const { return step_labels_; }

 private:
  std::vector<Graph> snapshots_;
  std::vector<long long> step_labels_;
};

}  // namespace netda
