#include "netda/graph_measures.hpp"

#include <cmath>
#include <string>

#include "netda/errors.hpp"

namespace netda {

double degree(const Graph& g, NodeId v) {
  g.check_node(v);
  double s = 0.0;
  for (const Arc& a : g.out(v)) s += std::abs(a.w);
  return s;
}

std::vector<double> weighted_degrees(const Graph& g) {
  std::vector<double> d(static_cast<std::size_t>(g.n()), 0.0);
  for (NodeId v = 0; v < g.n(); ++v) d[static_cast<std::size_t>(v)] = degree(g, v);
  return d;
}

std::vector<double> betweenness(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<double> centrality(n, 0.0);
  if (n == 0) return centrality;

  std::vector<NodeId> stack_order;
  stack_order.reserve(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<double> sigma(n);
  std::vector<int> dist(n);
  std::vector<double> delta(n);
  std::vector<NodeId> queue(n);

  for (NodeId s = 0; s < g.n(); ++s) {
    stack_order.clear();
    for (std::size_t i = 0; i < n; ++i) {
      preds[i].clear();
      sigma[i] = 0.0;
      dist[i] = -1;
      delta[i] = 0.0;
    }
    sigma[static_cast<std::size_t>(s)] = 1.0;
    dist[static_cast<std::size_t>(s)] = 0;
    std::size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const NodeId v = queue[head++];
      stack_order.push_back(v);
      for (const Arc& a : g.out(v)) {
        const auto w = static_cast<std::size_t>(a.to);
        if (dist[w] < 0) {
          dist[w] = dist[static_cast<std::size_t>(v)] + 1;
          queue[tail++] = a.to;
        }
        if (dist[w] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[w] += sigma[static_cast<std::size_t>(v)];
          preds[w].push_back(v);
        }
      }
    }
    for (auto it = stack_order.rbegin(); it != stack_order.rend(); ++it) {
      const auto w = static_cast<std::size_t>(*it);
      for (NodeId v : preds[w]) {
        const auto vi = static_cast<std::size_t>(v);
        delta[vi] += sigma[vi] / sigma[w] * (1.0 + delta[w]);
      }
      if (*it != s) centrality[w] += delta[w];
    }
  }

  if (!g.directed())
    for (double& c : centrality) c *= 0.5;
  return centrality;
}

Graph overlap(const TemporalNetwork& tn, int from, int to) {
  if (from < 0 || to < from || to >= tn.size())
    throw contract_violation("overlap range [" + std::to_string(from) + "," +
                             std::to_string(to) + "] invalid for " +
                             std::to_string(tn.size()) + " snapshots");
  GraphBuilder b(tn.n(), tn.directed());
  for (int t = from; t <= to; ++t)
    for (const Edge& e : tn.at(t).edges()) b.add_edge(e.u, e.v, e.w);
  return b.build();
}

double graph_density(const Graph& g) {
  if (g.n() < 2)
    throw config_error("density undefined for graphs with fewer than 2 nodes");
  const double n = g.n();
  const double pairs = g.directed() ? n * (n - 1.0) : n * (n - 1.0) / 2.0;
  return static_cast<double>(g.edge_count()) / pairs;
}

}  // namespace netda
