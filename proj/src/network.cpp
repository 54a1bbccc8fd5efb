#include "tsnet/network.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "tsnet/error.hpp"

namespace tsnet {

Network::Network(std::vector<std::string> labels, bool directed, bool weighted,
                 bool allow_self_loops)
    : labels_(std::move(labels)),
      directed_(directed),
      weighted_(weighted),
      allow_self_loops_(allow_self_loops) {}

namespace {

bool edge_less(const Edge& e, std::pair<std::size_t, std::size_t> key) {
  return std::pair(e.source, e.target) < key;
}

}  // namespace

bool Network::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= size() || v >= size()) invalid_argument("edge endpoint out of range");
  if (u == v && !allow_self_loops_) invalid_argument("self-loops are not allowed in this network");
  if (!directed_ && u > v) std::swap(u, v);
  const auto key = std::pair(u, v);
  if (edges_.empty() || edge_less(edges_.back(), key)) {
    edges_.push_back({u, v, weighted_ ? weight : 1.0});
    return true;
  }
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, edge_less);
  if (it != edges_.end() && it->source == u && it->target == v) return false;
  edges_.insert(it, {u, v, weighted_ ? weight : 1.0});
  return true;
}

std::optional<double> Network::weight(std::size_t u, std::size_t v) const {
  if (!directed_ && u > v) std::swap(u, v);
  const auto key = std::pair(u, v);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), key, edge_less);
  if (it != edges_.end() && it->source == u && it->target == v) return it->weight;
  return std::nullopt;
}

bool Network::has_edge(std::size_t u, std::size_t v) const { return weight(u, v).has_value(); }

Network net_knn(const DistanceMatrix& d, std::size_t k) {
  const std::size_t n = d.size();
  if (k < 1) invalid_argument("k must be >= 1");
  if (k >= n) {
    invalid_argument("k = " + std::to_string(k) + " needs at least " + std::to_string(k + 1) +
                     " nodes, matrix has " + std::to_string(n));
  }
  Network net(d.labels(), false, false);
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    order.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t a, std::size_t b) {
                        return std::pair(d(i, a), a) < std::pair(d(i, b), b);
                      });
    for (std::size_t r = 0; r < k; ++r) net.add_edge(i, order[r]);
  }
  return net;
}

Network net_enn(const DistanceMatrix& d, double eps) {
  if (!(eps >= 0.0)) invalid_argument("eps must be >= 0");
  Network net(d.labels(), false, false);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      if (d(i, j) <= eps) net.add_edge(i, j);
    }
  }
  return net;
}

Network net_weighted(const DistanceMatrix& d) {
  for (double v : d.values()) {
    if (v > 1.0) {
      invalid_argument("weighted networks need distances in [0, 1]; normalize the matrix first "
                       "(dist_matrix_normalize / --normalize)");
    }
  }
  Network net(d.labels(), false, true);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      const double w = 1.0 - d(i, j);
      if (w > 0.0) net.add_edge(i, j, w);
    }
  }
  return net;
}

Network net_significant(const DistanceMatrix& s) {
  for (double v : s.values()) {
    if (v != 0.0 && v != 1.0) invalid_argument("significance matrix entries must be 0 or 1");
  }
  Network net(s.labels(), false, false);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s(i, j) == 1.0) net.add_edge(i, j);
    }
  }
  return net;
}

NetworkBuilder knn_builder(std::size_t k) {
  return [k](const DistanceMatrix& d) { return net_knn(d, k); };
}

NetworkBuilder enn_builder(double eps) {
  if (!(eps >= 0.0)) invalid_argument("eps must be >= 0");
  return [eps](const DistanceMatrix& d) { return net_enn(d, eps); };
}

NetworkBuilder enn_percentile_builder(double p) {
  if (!(p > 0.0 && p < 1.0)) invalid_argument("percentile must lie in (0, 1)");
  return [p](const DistanceMatrix& d) { return net_enn(d, dist_percentile(d, p)); };
}

NetworkBuilder weighted_builder(bool normalize) {
  return [normalize](const DistanceMatrix& d) {
    return normalize ? net_weighted(dist_matrix_normalize(d).matrix) : net_weighted(d);
  };
}

LayerBuilder distance_layer(Kernel kernel, NetworkBuilder builder, std::size_t workers) {
  return [kernel = std::move(kernel), builder = std::move(builder),
          workers](const std::vector<TimeSeries>& series) {
    return builder(ts_dist(series, kernel, workers));
  };
}

LayerBuilder significance_layer(PairTest test, std::size_t workers) {
  return [test = std::move(test), workers](const std::vector<TimeSeries>& series) {
    return net_significant(pairwise_significance(series, test, workers));
  };
}

TemporalNetwork temporal_net(const std::vector<TimeSeries>& series, std::size_t width,
                             std::size_t step, const LayerBuilder& layer, std::size_t workers) {
  if (series.empty()) invalid_argument("temporal network needs at least one series");
  const std::size_t length = series.front().size();
  for (const auto& s : series) {
    if (s.size() != length) invalid_argument("temporal networks need series of equal length");
  }
  if (width < 1 || step < 1) invalid_argument("window width and step must be >= 1");
  if (width > length) invalid_argument("window width exceeds series length");

  std::vector<WindowSet> sliced;
  sliced.reserve(series.size());
  for (const auto& s : series) sliced.push_back(ts_to_windows(s, width, step));
  const std::size_t count = sliced.front().windows.size();

  TemporalNetwork out{width, step, sliced.front().starts, {}};
  std::vector<std::optional<Network>> layers(count);
  std::vector<std::optional<Error>> failures(count);

  auto build = [&](std::size_t w) {
    std::vector<TimeSeries> slice;
    slice.reserve(series.size());
    // Window series keep the source ids so that every layer shares labels.
    for (std::size_t s = 0; s < series.size(); ++s) {
      auto v = sliced[s].windows[w].values();
      slice.emplace_back(series[s].id(), std::vector<double>(v.begin(), v.end()));
    }
    try {
      layers[w] = layer(slice);
    } catch (const Error& e) {
      failures[w] = Error(e.kind(), "layer " + std::to_string(w + 1) + ": " + e.what());
    } catch (const std::exception& e) {
      failures[w] = Error(ErrorKind::kernel, "layer " + std::to_string(w + 1) + ": " + e.what());
    }
  };

  workers = std::clamp<std::size_t>(workers, 1, count);
  if (workers == 1) {
    for (std::size_t w = 0; w < count; ++w) build(w);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < workers; ++t) {
      threads.emplace_back([&, t] {
        for (std::size_t w = t; w < count; w += workers) build(w);
      });
    }
  }
  for (const auto& f : failures) {
    if (f) throw *f;
  }
  out.layers.reserve(count);
  for (auto& l : layers) out.layers.push_back(std::move(*l));
  return out;
}

}  // namespace tsnet
