#include "netda/multilayer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netda/assimilation.hpp"
#include "netda/errors.hpp"

namespace netda {

void LayerModel::validate() const {
  if (layer_sizes.empty()) throw config_error("layer model needs >= 1 layer");
  if (probs.size() != layer_sizes.size())
    throw shape_error("layer probability count does not match layer count");
  NodeId total = 0;
  for (int s : layer_sizes) {
    if (s < 1) throw config_error("layer sizes must be positive");
    total += s;
  }
  if (total != n()) throw shape_error("layer sizes do not sum to node count");
  for (int l : layer_of)
    if (l < 0 || l >= layers())
      throw shape_error("node assigned to nonexistent layer");
  for (double p : probs)
    if (p < 0.0) throw config_error("layer probabilities must be >= 0");
}

void MultilayerConfig::validate() const {
  if (n_layers < 1 || layer_size < 1)
    throw config_error("layer count and layer size must be positive");
  if (ba_m < 1 || ba_m >= layer_size)
    throw config_error("ba_m must satisfy 1 <= m < layer_size");
  if (inter_density < 0.0 || inter_density > 1.0)
    throw config_error("inter-layer density must lie in [0,1]");
  if (static_cast<int>(initial_probs.size()) != n_layers)
    throw config_error("initial_probs must have one entry per layer");
  for (double p : initial_probs)
    if (p < 0.0 || p > 1.0)
      throw config_error("initial probabilities must lie in [0,1]");
}

const std::vector<std::pair<std::string, std::vector<double>>>&
initial_probability_presets() {
  static const std::vector<std::pair<std::string, std::vector<double>>> k = {
      {"CI_a", {0.025, 0.01, 0.01, 0.01, 0.01}},
      {"CI_b", {0.035, 0.015, 0.01, 0.005, 0.005}},
      {"CI_c", {0.025, 0.025, 0.025, 0.005, 0.005}},
      {"CI_d", {0.045, 0.015, 0.01, 0.005, 0.005}},
      {"CI_e", {0.035, 0.025, 0.01, 0.01, 0.0}},
      {"CI_f", {0.02, 0.02, 0.015, 0.01, 0.01}},
  };
  return k;
}

std::vector<double> initial_probs_by_name(const std::string& name) {
  for (const auto& [k, v] : initial_probability_presets())
    if (k == name) return v;
  throw config_error("unknown initial-probability preset: " + name);
}

Graph barabasi_albert(NodeId n, int m, Rng& rng) {
  if (m < 1 || m >= n)
    throw config_error("barabasi_albert requires 1 <= m < n");
  GraphBuilder gb(n, false);

  // Repeated-node list: v appears d(v) times, so a uniform pick is a
  // degree-proportional pick.
  std::vector<NodeId> endpoints;
  endpoints.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m) *
                    2);

  // Star seed over the first m nodes.
  for (NodeId v = 1; v < m; ++v) {
    gb.add_edge(0, v, 1.0);
    endpoints.push_back(0);
    endpoints.push_back(v);
  }

  std::vector<NodeId> chosen;
  chosen.reserve(static_cast<std::size_t>(m));
  for (NodeId v = m; v < n; ++v) {
    chosen.clear();
    while (static_cast<int>(chosen.size()) < m) {
      NodeId target;
      if (endpoints.empty()) {
        // Degenerate m=1 start: the seed "star" has no edges yet.
        target = static_cast<NodeId>(rng.uniform_int(0, v - 1));
      } else {
        target = endpoints[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(endpoints.size()) - 1))];
      }
      if (std::find(chosen.begin(), chosen.end(), target) == chosen.end())
        chosen.push_back(target);
    }
    for (NodeId t : chosen) {
      gb.add_edge(v, t, 1.0);
      endpoints.push_back(t);
    }
    for (int k = 0; k < m; ++k) endpoints.push_back(v);
  }
  return gb.build();
}

std::pair<Graph, LayerModel> assemble_multilayer(const MultilayerConfig& cfg,
                                                 Rng& rng) {
  cfg.validate();
  const NodeId n = cfg.n();

  LayerModel lm;
  lm.layer_of.resize(static_cast<std::size_t>(n));
  lm.layer_sizes.assign(static_cast<std::size_t>(cfg.n_layers),
                        cfg.layer_size);
  lm.probs = cfg.initial_probs;
  for (NodeId v = 0; v < n; ++v)
    lm.layer_of[static_cast<std::size_t>(v)] = v / cfg.layer_size;

  GraphBuilder gb(n, true);
  auto add_undirected = [&](NodeId u, NodeId v) {
    gb.add_edge(u, v, 1.0);
    gb.add_edge(v, u, 1.0);
  };

  for (int layer = 0; layer < cfg.n_layers; ++layer) {
    const NodeId base = layer * cfg.layer_size;
    const Graph intra = barabasi_albert(cfg.layer_size, cfg.ba_m, rng);
    for (const Edge& e : intra.edges()) add_undirected(base + e.u, base + e.v);
  }

  // Inter-layer pairs, each present independently with inter_density.
  const double p = cfg.inter_density;
  if (p >= 1.0) {
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (lm.layer_of[static_cast<std::size_t>(u)] !=
            lm.layer_of[static_cast<std::size_t>(v)])
          add_undirected(u, v);
  } else if (p > 0.0) {
    const double logq = std::log1p(-p);
    for (int l1 = 0; l1 < cfg.n_layers; ++l1)
      for (int l2 = l1 + 1; l2 < cfg.n_layers; ++l2) {
        const auto rows = static_cast<long long>(cfg.layer_size);
        const double npairs = static_cast<double>(rows) *
                              static_cast<double>(rows);
        double idx = -1.0;
        for (;;) {
          idx += 1.0 + std::floor(std::log1p(-rng.uniform01()) / logq);
          if (idx >= npairs) break;
          const auto k = static_cast<long long>(idx);
          const NodeId u = l1 * cfg.layer_size + static_cast<NodeId>(k / rows);
          const NodeId v = l2 * cfg.layer_size + static_cast<NodeId>(k % rows);
          add_undirected(u, v);
        }
      }
  }
  return {gb.build(), std::move(lm)};
}

double HashedDriftDraws::uniform_pm1(int layer) const {
  const auto key = mix_key(root_, tag("drift"), run_, step_,
                           static_cast<std::uint64_t>(layer));
  return 2.0 * hash_uniform01(key) - 1.0;
}

void drift_probabilities(LayerModel& lm, int t, const DriftDraws& draws) {
  if (t < 0) throw config_error("drift step must be >= 0");
  if (lm.drift_period < 1) throw config_error("drift period must be >= 1");
  if (t % lm.drift_period != 0) return;
  for (int i = 0; i < lm.layers(); ++i) {
    const double delta = lm.drift_half_width * draws.uniform_pm1(i);
    auto& p = lm.probs[static_cast<std::size_t>(i)];
    p = std::max(p + delta, 0.0);
  }
}

InfectionProbabilityFn layered_infection_fn(const LayerModel& lm) {
  lm.validate();
  const std::vector<int> layer_of = lm.layer_of;
  const std::vector<double> probs = lm.probs;
  return [layer_of, probs](NodeId, NodeId dst, double w) {
    if (w == 0.0) return 0.0;
    return probs[static_cast<std::size_t>(
        layer_of[static_cast<std::size_t>(dst)])];
  };
}

std::vector<double> layer_observation_operator(const Graph& g,
                                               const EpidemicState& state,
                                               const LayerModel& lm,
                                               bool mask_susceptible) {
  if (g.n() != state.n() || g.n() != lm.n())
    throw shape_error("graph, state, and layer model disagree on node count");
  std::vector<double> h(static_cast<std::size_t>(lm.layers()), 0.0);

  // Infected in-neighbour counts per node in one pass over infected arcs.
  std::vector<double> pressure(static_cast<std::size_t>(g.n()), 0.0);
  for (NodeId j = 0; j < g.n(); ++j) {
    if (!state.infected[static_cast<std::size_t>(j)]) continue;
    for (const Arc& a : g.out(j))
      pressure[static_cast<std::size_t>(a.to)] += (a.w != 0.0) ? 1.0 : 0.0;
  }
  for (NodeId v = 0; v < g.n(); ++v) {
    const auto i = static_cast<std::size_t>(v);
    if (state.vaccinated[i]) continue;
    if (mask_susceptible && (state.infected[i] || state.recovered[i])) continue;
    h[static_cast<std::size_t>(lm.layer_of[i])] += pressure[i];
  }
  return h;
}

std::vector<double> assimilate_layer_probs(
    const std::vector<double>& p_b, const std::vector<double>& delta_infections,
    const std::vector<double>& h_diag, double b_scale, double o_scale) {
  if (p_b.size() != delta_infections.size() || p_b.size() != h_diag.size())
    throw shape_error("layer assimilation inputs disagree on layer count");
  const auto l = static_cast<int>(p_b.size());

  assim::AssimilationProblem prob;
  prob.background = p_b;
  prob.observation = delta_infections;
  prob.op = assim::ObservationOperator::diagonal(h_diag);
  prob.cov_background = assim::Covariance::scaled_identity(l, b_scale);
  prob.cov_observation = assim::Covariance::scaled_identity(l, o_scale);

  auto res = assim::blue_update(prob);
  for (double& p : res.analysis) p = std::min(std::max(p, 0.0), 1.0);
  return res.analysis;
}

}  // namespace netda
