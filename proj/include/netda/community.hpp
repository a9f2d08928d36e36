#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "netda/graph.hpp"
#include "netda/rng.hpp"

namespace netda {

struct Partition {
  std::vector<int> assignment;  // node -> community in [0, k)
  int k = 0;
  bool converged = true;

  std::vector<std::vector<NodeId>> blocks() const;
  std::vector<int> block_sizes() const;
};

// Fluid community detection: k seed fluids expand and compete over the
// largest connected component, each node adopting the community with the
// highest summed density among itself and its neighbours; community density
// is 1/size and a fluid is never extinguished. Nodes outside the component
// attach to the community of their nearest assigned neighbour (seeded
// random if fully isolated). Deterministic for a fixed rng seed.
Partition fluid_communities(const Graph& g, int k, Rng& rng,
                            int max_iter = 100);

// (#intra-community edges + #inter-community non-edges) / C(n,2).
double performance_rate(const Graph& g, const Partition& p);

// Mean performance over seeds_per_k detection runs for each k.
std::vector<std::pair<int, double>> scan_community_number(
    const Graph& g, const std::vector<int>& k_range, int seeds_per_k,
    std::uint64_t seed);

}  // namespace netda
