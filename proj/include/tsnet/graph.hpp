#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsnet/network.hpp"

namespace tsnet {

// ---------------------------------------------------------------------------
// Serialization
//
// Edge list: tab-separated, header "source<TAB>target" plus "<TAB>weight"
// for weighted graphs, one row per edge in (source, target) index order.
// Isolated nodes are not representable. GraphML: one <node> per label, an
// edge-level "weight" key for weighted graphs.

void export_edgelist(const Network& net, std::ostream& out);
void export_edgelist(const Network& net, const std::filesystem::path& path);
/// Nodes are numbered in order of first appearance.
Network import_edgelist(std::istream& in, bool directed, const std::string& source_name = "edge list");
Network import_edgelist(const std::filesystem::path& path, bool directed);

void export_graphml(const Network& net, std::ostream& out);
void export_graphml(const Network& net, const std::filesystem::path& path);
/// Reads the subset of GraphML written by export_graphml.
Network import_graphml(std::istream& in, const std::string& source_name = "graphml");
Network import_graphml(const std::filesystem::path& path);

/// `.graphml` files by extension, edge lists otherwise.
Network read_network(const std::filesystem::path& path, bool directed = false);

/// Same graph up to node numbering: labels, flags and labeled edges match.
bool same_labeled_graph(const Network& a, const Network& b);

// ---------------------------------------------------------------------------
// Analysis

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  double density = 0.0;
  /// Total degree per node; a directed edge counts at both ends.
  std::vector<std::size_t> degrees;
  std::size_t components = 0;
  /// Weakly connected component sizes in order of their lowest node.
  std::vector<std::size_t> component_sizes;
};

GraphStats graph_stats(const Network& net);

/// Weakly connected component id per node, numbered by lowest member.
std::vector<std::size_t> connected_components(const Network& net);

/// Unweighted edge betweenness aligned with net.edges() (undirected).
std::vector<double> edge_betweenness(const Network& net);

/// Newman modularity of `membership` on the unweighted graph; 0 without edges.
double modularity(const Network& net, const std::vector<std::size_t>& membership);

struct CommunityPartition {
  /// Community id per node, numbered by lowest member.
  std::vector<std::size_t> membership;
  double modularity = 0.0;
  std::size_t communities = 0;
  /// Edges removed before reaching this partition.
  std::size_t removals = 0;
};

/// Repeatedly removes the edge of highest betweenness (the lowest such edge
/// on ties) and returns the component partition of highest modularity seen.
CommunityPartition girvan_newman(const Network& net);

}  // namespace tsnet
