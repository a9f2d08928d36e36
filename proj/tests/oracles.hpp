#pragma once

// Test-only oracles, kept independent of the implementation paths they
// check. The betweenness oracle counts shortest paths pairwise from
// all-pairs BFS tables (no Brandes accumulation); the gradient oracle is
// plain central differencing.

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "netda/assimilation.hpp"
#include "netda/graph.hpp"
#include "netda/rng.hpp"

namespace netda::test {

// sigma[u][v] = number of shortest u->v paths, dist[u][v] = hop count.
struct PathTables {
  std::vector<std::vector<int>> dist;
  std::vector<std::vector<double>> sigma;
};

inline PathTables all_pairs_paths(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  PathTables t;
  t.dist.assign(n, std::vector<int>(n, -1));
  t.sigma.assign(n, std::vector<double>(n, 0.0));
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < g.n(); ++s) {
    auto& dist = t.dist[static_cast<std::size_t>(s)];
    auto& sigma = t.sigma[static_cast<std::size_t>(s)];
    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    queue.assign(1, s);
    std::size_t head = 0;
    while (head < queue.size()) {
      const NodeId v = queue[head++];
      for (const Arc& a : g.out(v)) {
        const auto w = static_cast<std::size_t>(a.to);
        if (dist[w] < 0) {
          dist[w] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(a.to);
        }
        if (dist[w] == dist[static_cast<std::size_t>(v)] + 1)
          sigma[w] += sigma[static_cast<std::size_t>(v)];
      }
    }
  }
  return t;
}

// g(v) = sum over pairs (u,q), u != q != v, of sigma_uq(v) / sigma_uq with
// sigma_uq(v) = sigma_uv * sigma_vq when v lies on a shortest path.
inline std::vector<double> betweenness_oracle(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  const PathTables t = all_pairs_paths(g);
  std::vector<double> c(n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t q = 0; q < n; ++q) {
      if (u == q || t.dist[u][q] < 0) continue;
      for (std::size_t v = 0; v < n; ++v) {
        if (v == u || v == q) continue;
        if (t.dist[u][v] < 0 || t.dist[v][q] < 0) continue;
        if (t.dist[u][v] + t.dist[v][q] != t.dist[u][q]) continue;
        c[v] += t.sigma[u][v] * t.sigma[v][q] / t.sigma[u][q];
      }
    }
  if (!g.directed())
    for (double& x : c) x *= 0.5;
  return c;
}

inline std::vector<double> fd_gradient(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-6) {
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = x[i];
    x[i] = xi + h;
    const double fp = f(x);
    x[i] = xi - h;
    const double fm = f(x);
    x[i] = xi;
    grad[i] = (fp - fm) / (2.0 * h);
  }
  return grad;
}

// Erdos-Renyi-style random graph for property tests.
inline Graph random_graph(NodeId n, double p, Rng& rng, bool directed = false,
                          bool weighted = false) {
  GraphBuilder gb(n, directed);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (rng.uniform01() < p) {
        const double w =
            weighted ? 0.25 + 4.0 * rng.uniform01() : 1.0;
        gb.add_edge(i, j, w);
      }
    }
  return gb.build();
}

inline assim::Matrix random_spd_matrix(int dim, Rng& rng) {
  // Symmetric, strictly diagonally dominant, hence SPD.
  assim::Matrix m = assim::Matrix::zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j <= i; ++j) {
      const double v = (rng.uniform01() - 0.5) * 0.4;
      m.at(i, j) = v;
      m.at(j, i) = v;
    }
  for (int i = 0; i < dim; ++i) {
    double off = 0.0;
    for (int j = 0; j < dim; ++j)
      if (j != i) off += std::abs(m.at(i, j));
    m.at(i, i) = off + 0.5 + rng.uniform01();
  }
  return m;
}

inline std::vector<double> random_vector(std::size_t n, Rng& rng,
                                         double lo = -1.0, double hi = 1.0) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Minimal well-formedness check for the SVG output: every opened tag is
// closed in order, attributes are quoted, exactly one root element.
bool xml_well_formed(const std::string& text);

}  // namespace netda::test
