#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tsnet/dist_matrix.hpp"
#include "tsnet/kernel.hpp"

namespace tsnet {

struct Edge {
  std::size_t source;  // 0-based node index; source < target when undirected
  std::size_t target;
  double weight = 1.0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Labeled graph with edges kept sorted by (source, target).
class Network {
 public:
  Network(std::vector<std::string> labels, bool directed, bool weighted,
          bool allow_self_loops = false);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  bool directed() const noexcept { return directed_; }
  bool weighted() const noexcept { return weighted_; }
  bool allows_self_loops() const noexcept { return allow_self_loops_; }

  /// Inserts u-v (canonicalized when undirected). Returns false and keeps
  /// the existing weight when the edge is already present.
  bool add_edge(std::size_t u, std::size_t v, double weight = 1.0);
  bool has_edge(std::size_t u, std::size_t v) const;
  std::optional<double> weight(std::size_t u, std::size_t v) const;

  friend bool operator==(const Network&, const Network&) = default;

 private:
  std::vector<std::string> labels_;
  bool directed_;
  bool weighted_;
  bool allow_self_loops_;
  std::vector<Edge> edges_;
};

struct TemporalNetwork {
  std::size_t width = 0;
  std::size_t step = 0;
  std::vector<std::size_t> window_starts;  // 1-based
  std::vector<Network> layers;
};

/// Each node linked to its k nearest others (ties to the lower index); the
/// undirected union of those choices.
Network net_knn(const DistanceMatrix& d, std::size_t k);

/// Edge iff d_ij <= eps.
Network net_enn(const DistanceMatrix& d, double eps);

/// Complete graph with weights 1 - d_ij; zero weights are dropped. Entries
/// must lie in [0, 1].
Network net_weighted(const DistanceMatrix& d);

/// Edge iff s_ij = 1 for a 0/1 significance matrix.
Network net_significant(const DistanceMatrix& s);

using NetworkBuilder = std::function<Network(const DistanceMatrix&)>;
using LayerBuilder = std::function<Network(const std::vector<TimeSeries>&)>;

NetworkBuilder knn_builder(std::size_t k);
NetworkBuilder enn_builder(double eps);
/// eps taken as dist_percentile(D, p) of each matrix.
NetworkBuilder enn_percentile_builder(double p);
/// Normalizes first when `normalize` is set.
NetworkBuilder weighted_builder(bool normalize);

/// ts_dist with `kernel` followed by `builder`.
LayerBuilder distance_layer(Kernel kernel, NetworkBuilder builder, std::size_t workers = 1);
/// pairwise_significance with `test` followed by net_significant.
LayerBuilder significance_layer(PairTest test, std::size_t workers = 1);

/// One layer per aligned window of all series. Errors name the layer.
TemporalNetwork temporal_net(const std::vector<TimeSeries>& series, std::size_t width,
                             std::size_t step, const LayerBuilder& layer, std::size_t workers = 1);

}  // namespace tsnet
