#pragma once

#include <optional>
#include <vector>

#include "netda/epidemic.hpp"
#include "netda/graph.hpp"
#include "netda/rng.hpp"

namespace netda {

enum class StrategyKind { random, highest_degree, highest_centrality };
enum class TieBreak { lowest_index, seeded_random };

struct StrategyConfig {
  StrategyKind kind = StrategyKind::random;
  double capacity_fraction = 0.02;
  TieBreak tie_break = TieBreak::lowest_index;
  // When set, overrides round(capacity_fraction * n) as the per-round dose
  // count.
  std::optional<int> absolute_budget;

  void validate() const;
  int budget(NodeId n) const;
};

// Picks exactly min(budget, #eligible) nodes to vaccinate this round.
// Eligible = not yet vaccinated (infected/recovered stay eligible: doses can
// fail). Ranked strategies score on `g`; nodes with zero score rank below
// any positive-score node.
std::vector<NodeId> select_targets(const Graph& g, const EpidemicState& state,
                                   const StrategyConfig& cfg, Rng& rng);

// Sets the vaccinated flag on targets; infection flags and clocks untouched.
// Throws contract_violation if a target is already vaccinated.
EpidemicState apply_vaccination(EpidemicState state,
                                const std::vector<NodeId>& targets);

}  // namespace netda
