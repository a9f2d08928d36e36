#include "netda/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "netda/errors.hpp"
#include "netda/graph_measures.hpp"

namespace netda {

void StrategyConfig::validate() const {
  if (capacity_fraction < 0.0 || capacity_fraction > 1.0)
    throw config_error("capacity_fraction must lie in [0,1]");
  if (absolute_budget && *absolute_budget < 0)
    throw config_error("absolute dose budget must be non-negative");
}

int StrategyConfig::budget(NodeId n) const {
  if (absolute_budget) return *absolute_budget;
  return static_cast<int>(
      std::floor(capacity_fraction * static_cast<double>(n) + 0.5));
}

std::vector<NodeId> select_targets(const Graph& g, const EpidemicState& state,
                                   const StrategyConfig& cfg, Rng& rng) {
  cfg.validate();
  if (g.n() != state.n())
    throw shape_error("graph and state disagree on node count");

  std::vector<NodeId> eligible;
  eligible.reserve(static_cast<std::size_t>(g.n()));
  for (NodeId v = 0; v < g.n(); ++v)
    if (!state.vaccinated[static_cast<std::size_t>(v)]) eligible.push_back(v);

  const auto budget = static_cast<std::size_t>(std::max(cfg.budget(g.n()), 0));
  const std::size_t take = std::min(budget, eligible.size());
  if (take == 0) return {};

  if (cfg.kind == StrategyKind::random) {
    // Partial Fisher-Yates over the eligible list.
    for (std::size_t i = 0; i < take; ++i) {
      const auto j = static_cast<std::size_t>(rng.uniform_int(
          static_cast<std::int64_t>(i),
          static_cast<std::int64_t>(eligible.size()) - 1));
      std::swap(eligible[i], eligible[j]);
    }
    eligible.resize(take);
    std::sort(eligible.begin(), eligible.end());
    return eligible;
  }

  const std::vector<double> scores = cfg.kind == StrategyKind::highest_degree
                                         ? weighted_degrees(g)
                                         : betweenness(g);

  std::vector<std::uint64_t> tiebreak_rank;
  if (cfg.tie_break == TieBreak::seeded_random) {
    std::vector<NodeId> perm(static_cast<std::size_t>(g.n()));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    tiebreak_rank.resize(perm.size());
    for (std::size_t r = 0; r < perm.size(); ++r)
      tiebreak_rank[static_cast<std::size_t>(perm[r])] = r;
  }

  auto rank_of = [&](NodeId v) -> std::uint64_t {
    return tiebreak_rank.empty() ? static_cast<std::uint64_t>(v)
                                 : tiebreak_rank[static_cast<std::size_t>(v)];
  };
  std::sort(eligible.begin(), eligible.end(), [&](NodeId a, NodeId b) {
    const double sa = scores[static_cast<std::size_t>(a)];
    const double sb = scores[static_cast<std::size_t>(b)];
    if (sa != sb) return sa > sb;
    return rank_of(a) < rank_of(b);
  });
  eligible.resize(take);
  std::sort(eligible.begin(), eligible.end());
  return eligible;
}

EpidemicState apply_vaccination(EpidemicState state,
                                const std::vector<NodeId>& targets) {
  for (NodeId v : targets) {
    if (v < 0 || v >= state.n())
      throw contract_violation("vaccination target out of range: " +
                               std::to_string(v));
    auto& flag = state.vaccinated[static_cast<std::size_t>(v)];
    if (flag)
      throw contract_violation("node " + std::to_string(v) +
                               " already vaccinated");
    flag = 1;
  }
  return state;
}

}  // namespace netda
