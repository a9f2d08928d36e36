#include "netda/contact_data.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "netda/errors.hpp"

namespace netda {

ContactLog parse_contact_log(std::istream& in) {
  ContactLog log;
  std::unordered_map<std::string, NodeId> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long tick;
    std::string a, b;
    if (!(fields >> tick >> a >> b))
      throw parse_error("contact log line " + std::to_string(lineno) +
                        ": expected `<tick> <id_i> <id_j>`");
    if (a == b)
      throw parse_error("contact log line " + std::to_string(lineno) +
                        ": self-contact of id '" + a + "'");
    auto intern = [&](const std::string& name) {
      auto [it, inserted] = ids.try_emplace(name, log.n());
      if (inserted) log.id_names.push_back(name);
      return it->second;
    };
    log.records.push_back({tick, intern(a), intern(b)});
  }
  if (log.records.empty()) throw parse_error("contact log contains no records");
  std::stable_sort(log.records.begin(), log.records.end(),
                   [](const ContactRecord& x, const ContactRecord& y) {
                     return x.tick < y.tick;
                   });
  return log;
}

ContactLog parse_contact_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open contact log: " + path);
  return parse_contact_log(in);
}

TemporalNetwork condense(const ContactLog& log, int window) {
  if (window < 1) throw config_error("condense window must be >= 1");
  std::vector<long long> ticks;
  ticks.reserve(log.records.size());
  for (const ContactRecord& r : log.records) ticks.push_back(r.tick);
  ticks.erase(std::unique(ticks.begin(), ticks.end()), ticks.end());

  const auto distinct = static_cast<long long>(ticks.size());
  const int steps = static_cast<int>((distinct + window - 1) / window);

  std::vector<GraphBuilder> builders;
  builders.reserve(static_cast<std::size_t>(steps));
  for (int s = 0; s < steps; ++s) builders.emplace_back(log.n(), false);

  std::size_t rank = 0;
  long long current = ticks.empty() ? 0 : ticks.front();
  for (const ContactRecord& r : log.records) {
    while (r.tick != current) {
      ++rank;
      current = ticks[rank];
    }
    builders[rank / static_cast<std::size_t>(window)].add_edge(r.i, r.j, 1.0);
  }

  std::vector<Graph> snaps;
  snaps.reserve(builders.size());
  std::vector<long long> labels;
  for (int s = 0; s < steps; ++s) {
    snaps.push_back(builders[static_cast<std::size_t>(s)].build());
    labels.push_back(ticks[static_cast<std::size_t>(s) *
                           static_cast<std::size_t>(window)]);
  }
  return TemporalNetwork(std::move(snaps), std::move(labels));
}

namespace {

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

std::vector<NodeId> draw_hidden(NodeId n, double fraction, Rng& rng) {
  const int k = round_half_up(fraction * static_cast<double>(n));
  return rng.sample_without_replacement(n, k);
}

}  // namespace

std::vector<NodeId> hidden_nodes(const ObservationMask& mask, NodeId n,
                                 int step) {
  if (mask.fraction < 0.0 || mask.fraction > 1.0)
    throw config_error("mask fraction must lie in [0,1]");
  Rng rng = mask.mode == ObservationMask::Mode::static_hidden
                ? make_stream(mask.seed, tag("mask"))
                : make_stream(mask.seed, tag("mask"),
                              static_cast<std::uint64_t>(step));
  return draw_hidden(n, mask.fraction, rng);
}

TemporalNetwork apply_mask(const TemporalNetwork& tn,
                           const ObservationMask& mask) {
  if (mask.fraction < 0.0 || mask.fraction > 1.0)
    throw config_error("mask fraction must lie in [0,1]");
  std::vector<char> hidden(static_cast<std::size_t>(tn.n()), 0);
  const bool static_mode = mask.mode == ObservationMask::Mode::static_hidden;
  if (static_mode)
    for (NodeId v : hidden_nodes(mask, tn.n(), 0))
      hidden[static_cast<std::size_t>(v)] = 1;

  std::vector<Graph> snaps;
  snaps.reserve(static_cast<std::size_t>(tn.size()));
  for (int t = 0; t < tn.size(); ++t) {
    if (!static_mode) {
      std::fill(hidden.begin(), hidden.end(), 0);
      for (NodeId v : hidden_nodes(mask, tn.n(), t))
        hidden[static_cast<std::size_t>(v)] = 1;
    }
    GraphBuilder b(tn.n(), tn.directed());
    for (const Edge& e : tn.at(t).edges())
      if (!hidden[static_cast<std::size_t>(e.u)] &&
          !hidden[static_cast<std::size_t>(e.v)])
        b.add_edge(e.u, e.v, e.w);
    snaps.push_back(b.build());
  }
  return TemporalNetwork(std::move(snaps), tn.step_labels());
}

std::vector<std::vector<Edge>> subnetwork_observations(
    const TemporalNetwork& tn, const std::vector<std::vector<NodeId>>& blocks) {
  std::vector<int> block_of(static_cast<std::size_t>(tn.n()), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (NodeId v : blocks[b]) {
      if (v < 0 || v >= tn.n())
        throw config_error("partition block references node out of range");
      auto& slot = block_of[static_cast<std::size_t>(v)];
      if (slot != -1) throw config_error("partition blocks overlap at node " +
                                         std::to_string(v));
      slot = static_cast<int>(b);
    }
  }
  std::vector<std::vector<Edge>> obs;
  obs.reserve(static_cast<std::size_t>(tn.size()));
  for (int t = 0; t < tn.size(); ++t) {
    std::vector<Edge> step_obs;
    for (const Edge& e : tn.at(t).edges()) {
      const int bu = block_of[static_cast<std::size_t>(e.u)];
      const int bv = block_of[static_cast<std::size_t>(e.v)];
      if (bu != -1 && bu == bv) step_obs.push_back(e);
    }
    obs.push_back(std::move(step_obs));
  }
  return obs;
}

TemporalNetwork synthetic_school_network(const SyntheticSchoolConfig& cfg) {
  NodeId total = 0;
  for (NodeId s : cfg.community_sizes) total += s;
  if (total != cfg.n)
    throw config_error("synthetic community sizes must sum to n");
  if (cfg.steps < 1) throw config_error("synthetic network needs >= 1 step");

  const auto n = static_cast<std::size_t>(cfg.n);
  std::vector<int> block_of(n);
  {
    NodeId next = 0;
    for (std::size_t b = 0; b < cfg.community_sizes.size(); ++b)
      for (NodeId k = 0; k < cfg.community_sizes[b]; ++k, ++next)
        block_of[static_cast<std::size_t>(next)] = static_cast<int>(b);
  }

  // Persistent per-student activity with a heavy tail, so the condensed
  // snapshots carry the strongly uneven contact counts seen in real logs.
  std::vector<double> activity(n);
  {
    Rng arng = make_stream(cfg.seed, tag("synth-activity"));
    for (double& a : activity) {
      const double u = arng.uniform01();
      a = 0.35 + 2.1 * std::pow(u, 2.8);
    }
  }

  // Normalize pair probabilities so the expected edge count hits the target
  // density exactly, split intra/inter by the configured share.
  double intra_mass = 0.0, inter_mass = 0.0;
  double intra_pairs = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = activity[i] * activity[j];
      if (block_of[i] == block_of[j]) {
        intra_mass += m;
        intra_pairs += 1.0;
      } else {
        inter_mass += m;
      }
    }
  const double all_pairs = static_cast<double>(n) *
                           (static_cast<double>(n) - 1.0) / 2.0;
  const double expected_edges = cfg.target_density * all_pairs;
  const double c_intra =
      intra_mass > 0.0 ? cfg.intra_edge_share * expected_edges / intra_mass : 0.0;
  const double c_inter = inter_mass > 0.0
                             ? (1.0 - cfg.intra_edge_share) * expected_edges /
                                   inter_mass
                             : 0.0;

  std::vector<Graph> snaps;
  snaps.reserve(static_cast<std::size_t>(cfg.steps));
  for (int t = 0; t < cfg.steps; ++t) {
    GraphBuilder gb(cfg.n, false);
    Rng rng = make_stream(cfg.seed, tag("synth-step"),
                          static_cast<std::uint64_t>(t));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = block_of[i] == block_of[j] ? c_intra : c_inter;
        const double q = std::min(1.0, c * activity[i] * activity[j]);
        if (rng.uniform01() < q) {
          const double w = 1.0 + static_cast<double>(rng.uniform_int(0, 2));
          gb.add_edge(static_cast<NodeId>(i), static_cast<NodeId>(j), w);
        }
      }
    snaps.push_back(gb.build());
  }
  return TemporalNetwork(std::move(snaps));
}

void dump_snapshots_csv(std::ostream& out, const TemporalNetwork& tn) {
  out << "step,i,j,w\n";
  for (int t = 0; t < tn.size(); ++t)
    for (const Edge& e : tn.at(t).edges())
      out << t << ',' << e.u << ',' << e.v << ',' << e.w << '\n';
}

}  // namespace netda
