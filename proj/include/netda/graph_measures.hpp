#pragma once

#include <vector>

#include "netda/graph.hpp"

namespace netda {

// d(v) = sum_k |A[k][v]|: sum of absolute weights of arcs leaving v (equals
// the incident-weight sum on undirected graphs).
double degree(const Graph& g, NodeId v);

// All degrees in one O(E) pass.
std::vector<double> weighted_degrees(const Graph& g);

// Betweenness centrality g(v) = sum over pairs of sigma_uq(v)/sigma_uq.
// Shortest paths are unweighted hop counts over nonzero-weight arcs;
// direction is respected on directed graphs; each unordered pair counts
// once on undirected graphs. Brandes accumulation, O(n * E).
std::vector<double> betweenness(const Graph& g);

// Edge-wise sum of snapshot weights over [from, to] (inclusive).
Graph overlap(const TemporalNetwork& tn, int from, int to);

// Nonzero pairs / possible pairs; ordered-pair denominator when directed.
double graph_density(const Graph& g);

}  // namespace netda
