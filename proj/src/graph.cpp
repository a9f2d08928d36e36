#include "netda/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netda/errors.hpp"

namespace netda {

void Graph::check_node(NodeId v) const {
  if (v < 0 || v >= n_)
    throw contract_violation("invalid node id " + std::to_string(v) +
                             " for graph with n=" + std::to_string(n_));
}

std::span<const Arc> Graph::out(NodeId v) const {
  check_node(v);
  const auto b = out_offsets_[static_cast<std::size_t>(v)];
  const auto e = out_offsets_[static_cast<std::size_t>(v) + 1];
  return {out_arcs_.data() + b, e - b};
}

std::span<const Arc> Graph::in(NodeId v) const {
  if (!directed_) return out(v);
  check_node(v);
  const auto b = in_offsets_[static_cast<std::size_t>(v)];
  const auto e = in_offsets_[static_cast<std::size_t>(v) + 1];
  return {in_arcs_.data() + b, e - b};
}

double Graph::weight(NodeId from, NodeId to) const {
  check_node(from);
  check_node(to);
  const auto arcs = out(from);
  auto it = std::lower_bound(
      arcs.begin(), arcs.end(), to,
      [](const Arc& a, NodeId t) { return a.to < t; });
  return (it != arcs.end() && it->to == to) ? it->w : 0.0;
}

GraphBuilder::GraphBuilder(NodeId n, bool directed)
    : n_(n), directed_(directed) {
  if (n < 0) throw config_error("graph node count must be non-negative");
}

void GraphBuilder::add_edge(NodeId u, NodeId v, double w) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_)
    throw contract_violation("edge endpoint out of range: (" +
                             std::to_string(u) + "," + std::to_string(v) +
                             ") with n=" + std::to_string(n_));
  if (u == v)
    throw contract_violation("self-loop rejected at node " + std::to_string(u));
  if (!std::isfinite(w))
    throw contract_violation("non-finite edge weight");
  if (!directed_ && u > v) std::swap(u, v);
  pending_.push_back({u, v, w});
}

namespace {

std::vector<std::size_t> csr_offsets(NodeId n, const std::vector<Arc>& arcs,
                                     const std::vector<NodeId>& src) {
  std::vector<std::size_t> offs(static_cast<std::size_t>(n) + 1, 0);
  for (NodeId s : src) ++offs[static_cast<std::size_t>(s) + 1];
  for (std::size_t i = 1; i < offs.size(); ++i) offs[i] += offs[i - 1];
  (void)arcs;
  return offs;
}

}  // namespace

Graph GraphBuilder::build() {
  // Merge duplicates by summing, drop exact zeros.
  std::sort(pending_.begin(), pending_.end(), [](const Edge& a, const Edge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  std::vector<Edge> merged;
  merged.reserve(pending_.size());
  for (const Edge& e : pending_) {
    if (!merged.empty() && merged.back().u == e.u && merged.back().v == e.v)
      merged.back().w += e.w;
    else
      merged.push_back(e);
  }
  std::erase_if(merged, [](const Edge& e) { return e.w == 0.0; });

  Graph g;
  g.n_ = n_;
  g.directed_ = directed_;
  g.edges_ = std::move(merged);

  // Arc lists: undirected edges materialize both directions.
  std::vector<NodeId> src;
  std::vector<Arc> arcs;
  src.reserve(g.edges_.size() * (directed_ ? 1 : 2));
  for (const Edge& e : g.edges_) {
    src.push_back(e.u);
    arcs.push_back({e.v, e.w});
    if (!directed_) {
      src.push_back(e.v);
      arcs.push_back({e.u, e.w});
    }
  }
  g.out_offsets_ = csr_offsets(n_, arcs, src);
  g.out_arcs_.resize(arcs.size());
  {
    auto cursor = g.out_offsets_;
    for (std::size_t i = 0; i < arcs.size(); ++i)
      g.out_arcs_[cursor[static_cast<std::size_t>(src[i])]++] = arcs[i];
  }
  for (NodeId v = 0; v < n_; ++v) {
    auto b = g.out_offsets_[static_cast<std::size_t>(v)];
    auto e = g.out_offsets_[static_cast<std::size_t>(v) + 1];
    std::sort(g.out_arcs_.begin() + static_cast<std::ptrdiff_t>(b),
              g.out_arcs_.begin() + static_cast<std::ptrdiff_t>(e),
              [](const Arc& x, const Arc& y) { return x.to < y.to; });
  }

  if (directed_) {
    std::vector<NodeId> isrc;
    std::vector<Arc> iarcs;
    isrc.reserve(g.edges_.size());
    for (const Edge& e : g.edges_) {
      isrc.push_back(e.v);
      iarcs.push_back({e.u, e.w});
    }
    g.in_offsets_ = csr_offsets(n_, iarcs, isrc);
    g.in_arcs_.resize(iarcs.size());
    auto cursor = g.in_offsets_;
    for (std::size_t i = 0; i < iarcs.size(); ++i)
      g.in_arcs_[cursor[static_cast<std::size_t>(isrc[i])]++] = iarcs[i];
    for (NodeId v = 0; v < n_; ++v) {
      auto b = g.in_offsets_[static_cast<std::size_t>(v)];
      auto e = g.in_offsets_[static_cast<std::size_t>(v) + 1];
      std::sort(g.in_arcs_.begin() + static_cast<std::ptrdiff_t>(b),
                g.in_arcs_.begin() + static_cast<std::ptrdiff_t>(e),
                [](const Arc& x, const Arc& y) { return x.to < y.to; });
    }
  }
  return g;
}

TemporalNetwork::TemporalNetwork(std::vector<Graph> snapshots,
                                 std::vector<long long> step_labels)
    : snapshots_(std::move(snapshots)), step_labels_(std::move(step_labels)) {
  if (snapshots_.empty())
    throw config_error("temporal network needs at least one snapshot");
  const NodeId n0 = snapshots_.front().n();
  const bool d0 = snapshots_.front().directed();
  for (const Graph& g : snapshots_) {
    if (g.n() != n0)
      throw shape_error("temporal network snapshots disagree on node count");
    if (g.directed() != d0)
      throw shape_error("temporal network snapshots disagree on directedness");
  }
  if (!step_labels_.empty() &&
      step_labels_.size() != snapshots_.size())
    throw shape_error("step label count does not match snapshot count");
}

NodeId TemporalNetwork::n() const { return snapshots_.front().n(); }
bool TemporalNetwork::directed() const { return snapshots_.front().directed(); }

const Graph& TemporalNetwork::at(int t) const {
  if (t < 0 || t >= size())
    throw contract_violation("snapshot index out of range: " +
                             std::to_string(t));
  return snapshots_[static_cast<std::size_t>(t)];
}

}  // namespace netda
