#include "netda/community.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <string>

#include "netda/errors.hpp"

namespace netda {

std::vector<std::vector<NodeId>> Partition::blocks() const {
  std::vector<std::vector<NodeId>> b(static_cast<std::size_t>(k));
  for (std::size_t v = 0; v < assignment.size(); ++v)
    b[static_cast<std::size_t>(assignment[v])].push_back(
        static_cast<NodeId>(v));
  return b;
}

std::vector<int> Partition::block_sizes() const {
  std::vector<int> s(static_cast<std::size_t>(k), 0);
  for (int c : assignment) ++s[static_cast<std::size_t>(c)];
  return s;
}

namespace {

std::vector<NodeId> largest_component(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  std::vector<int> comp(n, -1);
  int best = -1;
  std::size_t best_size = 0;
  int next_comp = 0;
  std::vector<NodeId> queue;
  for (NodeId s = 0; s < g.n(); ++s) {
    if (comp[static_cast<std::size_t>(s)] != -1) continue;
    queue.clear();
    queue.push_back(s);
    comp[static_cast<std::size_t>(s)] = next_comp;
    std::size_t head = 0, size = 0;
    while (head < queue.size()) {
      const NodeId v = queue[head++];
      ++size;
      for (const Arc& a : g.out(v)) {
        auto& c = comp[static_cast<std::size_t>(a.to)];
        if (c == -1) {
          c = next_comp;
          queue.push_back(a.to);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best = next_comp;
    }
    ++next_comp;
  }
  std::vector<NodeId> members;
  members.reserve(best_size);
  for (NodeId v = 0; v < g.n(); ++v)
    if (comp[static_cast<std::size_t>(v)] == best) members.push_back(v);
  return members;
}

}  // namespace

Partition fluid_communities(const Graph& g, int k, Rng& rng, int max_iter) {
  if (g.directed())
    throw config_error("fluid community detection expects an undirected graph");
  if (k < 1) throw config_error("community count must be >= 1");
  const auto n = static_cast<std::size_t>(g.n());
  if (n == 0) throw config_error("fluid community detection needs a non-empty graph");

  const std::vector<NodeId> component = largest_component(g);
  if (static_cast<std::size_t>(k) > component.size())
    throw config_error("community count " + std::to_string(k) +
                       " exceeds largest component size " +
                       std::to_string(component.size()));

  std::vector<int> community(n, -1);
  std::vector<int> size(static_cast<std::size_t>(k), 0);
  std::vector<double> density(static_cast<std::size_t>(k), 1.0);

  // Seed fluids at k distinct component nodes.
  {
    std::vector<NodeId> seeds = component;
    rng.shuffle(seeds);
    for (int c = 0; c < k; ++c) {
      community[static_cast<std::size_t>(seeds[static_cast<std::size_t>(c)])] =
          c;
      size[static_cast<std::size_t>(c)] = 1;
    }
  }

  std::vector<NodeId> order = component;
  std::vector<double> score(static_cast<std::size_t>(k), 0.0);
  std::vector<int> touched;
  std::vector<int> maxima;
  bool converged = false;

  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    rng.shuffle(order);
    bool changed = false;
    for (NodeId v : order) {
      const auto vi = static_cast<std::size_t>(v);
      const int own = community[vi];

      touched.clear();
      auto bump = [&](int c, double d) {
        if (score[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        score[static_cast<std::size_t>(c)] += d;
      };
      if (own != -1) bump(own, density[static_cast<std::size_t>(own)]);
      for (const Arc& a : g.out(v)) {
        const int c = community[static_cast<std::size_t>(a.to)];
        if (c != -1) bump(c, density[static_cast<std::size_t>(c)]);
      }
      if (touched.empty()) continue;  // no assigned neighbours yet

      double best = 0.0;
      for (int c : touched)
        best = std::max(best, score[static_cast<std::size_t>(c)]);
      maxima.clear();
      for (int c : touched)
        if (score[static_cast<std::size_t>(c)] == best) maxima.push_back(c);
      for (int c : touched) score[static_cast<std::size_t>(c)] = 0.0;

      int chosen;
      if (own != -1 &&
          std::find(maxima.begin(), maxima.end(), own) != maxima.end()) {
        chosen = own;  // keep current community on ties
      } else {
        std::sort(maxima.begin(), maxima.end());
        chosen = maxima.size() == 1
                     ? maxima.front()
                     : maxima[static_cast<std::size_t>(rng.uniform_int(
                           0, static_cast<std::int64_t>(maxima.size()) - 1))];
      }
      if (chosen == own) continue;
      // A fluid is never extinguished: refuse updates that would empty one.
      if (own != -1 && size[static_cast<std::size_t>(own)] == 1) continue;

      if (own != -1) {
        --size[static_cast<std::size_t>(own)];
        density[static_cast<std::size_t>(own)] =
            1.0 / static_cast<double>(size[static_cast<std::size_t>(own)]);
      }
      community[vi] = chosen;
      ++size[static_cast<std::size_t>(chosen)];
      density[static_cast<std::size_t>(chosen)] =
          1.0 / static_cast<double>(size[static_cast<std::size_t>(chosen)]);
      changed = true;
    }
    converged = !changed;
  }

  // Attach nodes outside the component via multi-source BFS.
  {
    std::queue<NodeId> q;
    for (NodeId v = 0; v < g.n(); ++v)
      if (community[static_cast<std::size_t>(v)] != -1) q.push(v);
    while (!q.empty()) {
      const NodeId v = q.front();
      q.pop();
      for (const Arc& a : g.out(v)) {
        auto& c = community[static_cast<std::size_t>(a.to)];
        if (c == -1) {
          c = community[static_cast<std::size_t>(v)];
          q.push(a.to);
        }
      }
    }
    for (NodeId v = 0; v < g.n(); ++v) {
      auto& c = community[static_cast<std::size_t>(v)];
      if (c == -1)
        c = static_cast<int>(rng.uniform_int(0, k - 1));  // fully isolated
    }
  }

  Partition p;
  p.assignment = std::move(community);
  p.k = k;
  p.converged = converged;
  return p;
}

double performance_rate(const Graph& g, const Partition& p) {
  if (g.directed())
    throw config_error("performance rate expects an undirected graph");
  if (p.assignment.size() != static_cast<std::size_t>(g.n()))
    throw shape_error("partition size does not match graph");
  const double n = static_cast<double>(g.n());
  const double pairs = n * (n - 1.0) / 2.0;
  if (pairs == 0.0) return 1.0;

  long long intra_edges = 0;
  for (const Edge& e : g.edges())
    if (p.assignment[static_cast<std::size_t>(e.u)] ==
        p.assignment[static_cast<std::size_t>(e.v)])
      ++intra_edges;
  const long long inter_edges =
      static_cast<long long>(g.edge_count()) - intra_edges;

  double intra_pairs = 0.0;
  for (int s : p.block_sizes())
    intra_pairs += static_cast<double>(s) * (static_cast<double>(s) - 1.0) / 2.0;
  const double inter_pairs = pairs - intra_pairs;
  const double inter_non_edges =
      inter_pairs - static_cast<double>(inter_edges);

  return (static_cast<double>(intra_edges) + inter_non_edges) / pairs;
}

std::vector<std::pair<int, double>> scan_community_number(
    const Graph& g, const std::vector<int>& k_range, int seeds_per_k,
    std::uint64_t seed) {
  if (k_range.empty()) throw config_error("k range must be non-empty");
  if (seeds_per_k < 1) throw config_error("seeds_per_k must be >= 1");
  std::vector<std::pair<int, double>> out;
  out.reserve(k_range.size());
  for (int k : k_range) {
    double total = 0.0;
    for (int s = 0; s < seeds_per_k; ++s) {
      Rng rng = make_stream(seed, tag("fluid-scan"),
                            static_cast<std::uint64_t>(k),
                            static_cast<std::uint64_t>(s));
      total += performance_rate(g, fluid_communities(g, k, rng));
    }
    out.emplace_back(k, total / static_cast<double>(seeds_per_k));
  }
  return out;
}

}  // namespace netda
