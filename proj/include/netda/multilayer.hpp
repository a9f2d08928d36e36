#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "netda/epidemic.hpp"
#include "netda/graph.hpp"
#include "netda/rng.hpp"

namespace netda {

// Node-to-layer assignment with per-layer time-varying infectious
// probabilities. Probabilities drift every drift_period steps by a uniform
// perturbation of half-width drift_half_width, clipped at zero.
struct LayerModel {
  std::vector<int> layer_of;       // node -> layer
  std::vector<int> layer_sizes;    // sums to n
  std::vector<double> probs;       // p_i per layer
  int drift_period = 5;
  double drift_half_width = 0.0004;

  int layers() const { return static_cast<int>(layer_sizes.size()); }
  NodeId n() const { return static_cast<NodeId>(layer_of.size()); }
  void validate() const;
};

struct MultilayerConfig {
  int n_layers = 5;
  int layer_size = 200;
  int ba_m = 2;                 // preferential-attachment edges per arrival
  double inter_density = 0.005;
  std::vector<double> initial_probs;  // one entry per layer

  NodeId n() const { return n_layers * layer_size; }
  void validate() const;
};

// Named initial-probability presets for the layered scenarios.
// Returns {name, per-layer probabilities}.
const std::vector<std::pair<std::string, std::vector<double>>>&
initial_probability_presets();
std::vector<double> initial_probs_by_name(const std::string& name);

// Preferential attachment: a star seed of m nodes, then each arriving node
// attaches m edges to distinct existing nodes with probability proportional
// to degree. Undirected, simple, connected for m >= 1.
Graph barabasi_albert(NodeId n, int m, Rng& rng);

// Per-layer BA intra-graphs plus independent inter-layer edges of the given
// density. Stored directed (both arcs per undirected edge) because the
// infection probability depends on the receiving node's layer.
std::pair<Graph, LayerModel> assemble_multilayer(const MultilayerConfig& cfg,
                                                 Rng& rng);

// Applies the stochastic drift when t is a multiple of drift_period:
// p_i <- max(p_i + delta_i, 0), delta_i uniform on +-drift_half_width.
struct DriftDraws {
  virtual ~DriftDraws() = default;
  virtual double uniform_pm1(int layer) const = 0;  // in [-1, 1)
};
class HashedDriftDraws final : public DriftDraws {
 public:
  HashedDriftDraws(std::uint64_t root, std::uint64_t run, std::uint64_t step)
      : root_(root), run_(run), step_(step) {}
  double uniform_pm1(int layer) const override;

 private:
  std::uint64_t root_, run_, step_;
};
void drift_probabilities(LayerModel& lm, int t, const DriftDraws& draws);

// Arc (j -> v) transmits with the receiving node's layer probability.
InfectionProbabilityFn layered_infection_fn(const LayerModel& lm);

// Diagonal state-observation map h_i = expected new infections in layer i
// per unit p_i: infected-in-neighbour counts summed over layer-i nodes that
// can still be infected. mask_susceptible=false drops the (1-I)(1-R)
// factors, keeping only the vaccination mask.
std::vector<double> layer_observation_operator(const Graph& g,
                                               const EpidemicState& state,
                                               const LayerModel& lm,
                                               bool mask_susceptible = true);

// BLUE update of the layer probabilities from observed per-layer new
// infections, with B = b I and O = o I; result clipped to [0,1].
std::vector<double> assimilate_layer_probs(const std::vector<double>& p_b,
                                           const std::vector<double>& delta_infections,
                                           const std::vector<double>& h_diag,
                                           double b_scale, double o_scale);

}  // namespace netda
