#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "netda/graph.hpp"
#include "netda/rng.hpp"

namespace netda {

struct ContactRecord {
  long long tick;
  NodeId i, j;
};

// Face-to-face contact log with dense re-indexed node ids. id_names maps a
// dense id back to the external identifier it came from.
struct ContactLog {
  std::vector<ContactRecord> records;  // stably sorted by tick
  std::vector<std::string> id_names;

  NodeId n() const { return static_cast<NodeId>(id_names.size()); }
};

// One record per line: `<tick> <id_i> <id_j> [ignored...]`, '#' comments and
// blank lines skipped. External ids become dense ints in first-appearance
// order.
ContactLog parse_contact_log(std::istream& in);
ContactLog parse_contact_log_file(const std::string& path);

// Groups raw ticks into consecutive windows of `window` distinct tick
// values; snapshot edge weight = number of contacts of that pair within the
// window. Snapshot count = ceil(distinct_ticks / window).
TemporalNetwork condense(const ContactLog& log, int window);

struct ObservationMask {
  enum class Mode { static_hidden, per_step };
  Mode mode = Mode::static_hidden;
  double fraction = 0.0;
  std::uint64_t seed = 0;
};

// Hidden node set for one snapshot; static mode ignores `step`.
// |hidden| = round-half-up(fraction * n).
std::vector<NodeId> hidden_nodes(const ObservationMask& mask, NodeId n,
                                 int step);

// Background network: every edge incident to a hidden node removed.
TemporalNetwork apply_mask(const TemporalNetwork& tn,
                           const ObservationMask& mask);

// Per-step observed edge sets: true edges whose endpoints share a partition
// block. Blocks must be disjoint subsets of [0, n).
std::vector<std::vector<Edge>> subnetwork_observations(
    const TemporalNetwork& tn, const std::vector<std::vector<NodeId>>& blocks);

struct SyntheticSchoolConfig {
  NodeId n = 329;
  int steps = 74;
  std::vector<NodeId> community_sizes = {107, 110, 112};
  double target_density = 0.0076;
  double intra_edge_share = 0.9;  // fraction of expected edges inside blocks
  std::uint64_t seed = 20250809;
};

// Bundled fallback when the real contact dataset is unavailable: a planted
// 3-community random temporal network of matching size and density.
TemporalNetwork synthetic_school_network(const SyntheticSchoolConfig& cfg);

// Snapshot dump: `step,i,j,w` per edge.
void dump_snapshots_csv(std::ostream& out, const TemporalNetwork& tn);

}  // namespace netda
