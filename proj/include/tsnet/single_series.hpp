#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsnet/kernel.hpp"
#include "tsnet/network.hpp"
#include "tsnet/series.hpp"

namespace tsnet {

/// Transition network over equal-width value bins. `graph` carries raw
/// transition counts as weights; `probabilities[e]` is edge e's count
/// divided by its source's outgoing total.
struct TransitionNetwork {
  Network graph;
  std::vector<double> probabilities;
  /// Bin (1-based) represented by each node.
  std::vector<int> node_bins;
  /// Constant input: one node, no edges.
  bool degenerate = false;
};

TransitionNetwork tsnet_qn(const TimeSeries& series, int breaks);

enum class VisibilityKind { natural, horizontal };
enum class VgAlgorithm { naive, divide_conquer };

struct VgOptions {
  VisibilityKind kind = VisibilityKind::natural;
  bool directed = false;
  /// Drop edges spanning more than `limit` time steps.
  std::optional<std::size_t> limit;
  VgAlgorithm algorithm = VgAlgorithm::naive;
  /// Source-node parallelism of the naive algorithm.
  std::size_t workers = 1;
};

/// Nodes are labeled by their 1-based time index.
Network tsnet_vg(const TimeSeries& series, const VgOptions& options = {});

enum class StateMetric { euclidean, manhattan, chebyshev };
StateMetric parse_state_metric(const std::string& text);

struct EmbeddingSpec {
  std::size_t dimension = 1;
  std::size_t delay = 1;
  StateMetric metric = StateMetric::euclidean;
  double radius = 1.0;
};

/// Recurrence network of the delay-embedded states; states closer than or
/// at `radius` are linked. Nodes are labeled by the state's start index.
Network tsnet_rn(const TimeSeries& series, const EmbeddingSpec& spec);

/// Windows of the series as nodes, linked by `builder` over their distance
/// matrix. Nodes are labeled by window start index.
Network tsnet_windows(const TimeSeries& series, std::size_t width, std::size_t step,
                      const Kernel& kernel, const NetworkBuilder& builder,
                      std::size_t workers = 1);

}  // namespace tsnet
