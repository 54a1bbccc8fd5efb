#include "tsnet/single_series.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "tsnet/error.hpp"

namespace tsnet {

TransitionNetwork tsnet_qn(const TimeSeries& series, int breaks) {
  if (breaks < 2) invalid_argument("transition networks need breaks >= 2");
  if (series.size() < 2) invalid_argument("transition networks need at least 2 values");
  const auto symbols = discretize(series.values(), bins::Fixed{breaks}).symbols;

  std::vector<int> present(symbols.begin(), symbols.end());
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  std::vector<std::string> labels;
  std::map<int, std::size_t> node_of;
  for (int b : present) {
    node_of[b] = labels.size();
    labels.push_back(std::to_string(b));
  }

  TransitionNetwork out{Network(labels, true, true, true), {}, present, false};
  if (present.size() == 1) {
    out.degenerate = true;
    return out;
  }

  std::map<std::pair<std::size_t, std::size_t>, double> counts;
  for (std::size_t t = 0; t + 1 < symbols.size(); ++t) {
    counts[{node_of[symbols[t]], node_of[symbols[t + 1]]}] += 1.0;
  }
  std::vector<double> outgoing(labels.size(), 0.0);
  for (const auto& [key, c] : counts) {
    out.graph.add_edge(key.first, key.second, c);
    outgoing[key.first] += c;
  }
  out.probabilities.reserve(out.graph.edge_count());
  for (const auto& e : out.graph.edges()) out.probabilities.push_back(e.weight / outgoing[e.source]);
  return out;
}

namespace {

using EdgeList = std::vector<std::pair<std::size_t, std::size_t>>;

// Natural visibility from `a` towards later indices up to `last`: j is
// visible iff its slope from a beats every intermediate slope.
void scan_natural_right(std::span<const double> x, std::size_t a, std::size_t last, EdgeList& out) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = a + 1; j <= last; ++j) {
    const double s = (x[j] - x[a]) / static_cast<double>(j - a);
    if (s > best) {
      out.emplace_back(a, j);
      best = s;
    }
  }
}

// Mirror of scan_natural_right towards earlier indices down to `first`.
void scan_natural_left(std::span<const double> x, std::size_t a, std::size_t first, EdgeList& out) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = a; j-- > first;) {
    const double s = (x[a] - x[j]) / static_cast<double>(a - j);
    if (s < best) {
      out.emplace_back(j, a);
      best = s;
    }
  }
}

void scan_horizontal_right(std::span<const double> x, std::size_t a, std::size_t last, EdgeList& out) {
  double interior = -std::numeric_limits<double>::infinity();
  for (std::size_t j = a + 1; j <= last; ++j) {
    if (interior < std::min(x[a], x[j])) out.emplace_back(a, j);
    interior = std::max(interior, x[j]);
    if (x[j] >= x[a]) break;
  }
}

void scan_horizontal_left(std::span<const double> x, std::size_t a, std::size_t first, EdgeList& out) {
  double interior = -std::numeric_limits<double>::infinity();
  for (std::size_t j = a; j-- > first;) {
    if (interior < std::min(x[a], x[j])) out.emplace_back(j, a);
    interior = std::max(interior, x[j]);
    if (x[j] >= x[a]) break;
  }
}

EdgeList visibility_naive(std::span<const double> x, VisibilityKind kind, std::size_t last_span,
                          std::size_t workers) {
  const std::size_t n = x.size();
  std::vector<EdgeList> per_source(n);
  auto run = [&](std::size_t i) {
    const std::size_t last = std::min(n - 1, i + last_span);
    if (kind == VisibilityKind::natural) {
      scan_natural_right(x, i, last, per_source[i]);
    } else {
      scan_horizontal_right(x, i, last, per_source[i]);
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::jthread> threads;
    for (std::size_t t = 0; t < workers; ++t) {
      threads.emplace_back([&, t] {
        for (std::size_t i = t; i < n; i += workers) run(i);
      });
    }
  }
  EdgeList edges;
  for (auto& list : per_source) edges.insert(edges.end(), list.begin(), list.end());
  return edges;
}

// Leftmost-maximum range queries in O(1) after O(n log n) preprocessing.
class SparseArgmax {
 public:
  explicit SparseArgmax(std::span<const double> x) : x_(x) {
    const std::size_t n = x.size();
    table_.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) table_[0][i] = i;
    for (std::size_t len = 2; len <= n; len *= 2) {
      const auto& prev = table_.back();
      std::vector<std::size_t> row(n - len + 1);
      for (std::size_t i = 0; i + len <= n; ++i) row[i] = pick(prev[i], prev[i + len / 2]);
      table_.push_back(std::move(row));
    }
  }

  std::size_t query(std::size_t l, std::size_t r) const {
    const std::size_t len = r - l + 1;
    const auto level = static_cast<std::size_t>(std::bit_width(len) - 1);
    return pick(table_[level][l], table_[level][r + 1 - (std::size_t{1} << level)]);
  }

 private:
  std::size_t pick(std::size_t a, std::size_t b) const {
    if (x_[a] != x_[b]) return x_[a] > x_[b] ? a : b;
    return std::min(a, b);
  }

  std::span<const double> x_;
  std::vector<std::vector<std::size_t>> table_;
};

// A pair straddling the range maximum never sees across it, so each range
// contributes the maximum's own links and recurses on both sides.
EdgeList visibility_divide_conquer(std::span<const double> x, VisibilityKind kind) {
  const SparseArgmax argmax(x);
  EdgeList edges;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, x.size() - 1}};
  while (!stack.empty()) {
    auto [l, r] = stack.back();
    stack.pop_back();
    if (l >= r) continue;
    const std::size_t m = argmax.query(l, r);
    if (kind == VisibilityKind::natural) {
      scan_natural_left(x, m, l, edges);
      scan_natural_right(x, m, r, edges);
    } else {
      scan_horizontal_left(x, m, l, edges);
      scan_horizontal_right(x, m, r, edges);
    }
    if (m > l) stack.emplace_back(l, m - 1);
    if (m < r) stack.emplace_back(m + 1, r);
  }
  return edges;
}

std::vector<std::string> index_labels(std::size_t n, std::size_t first = 1) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) labels.push_back(std::to_string(first + k));
  return labels;
}

}  // namespace

Network tsnet_vg(const TimeSeries& series, const VgOptions& options) {
  const std::size_t n = series.size();
  if (n < 2) invalid_argument("visibility graphs need at least 2 values");
  if (options.limit && *options.limit < 1) invalid_argument("visibility limit must be >= 1");
  const std::size_t span = options.limit.value_or(n);

  EdgeList edges = options.algorithm == VgAlgorithm::naive
                       ? visibility_naive(series.values(), options.kind, span, options.workers)
                       : visibility_divide_conquer(series.values(), options.kind);
  std::sort(edges.begin(), edges.end());

  Network net(index_labels(n), options.directed, false);
  for (auto [i, j] : edges) {
    if (j - i <= span) net.add_edge(i, j);
  }
  return net;
}

StateMetric parse_state_metric(const std::string& text) {
  if (text == "euclidean") return StateMetric::euclidean;
  if (text == "manhattan") return StateMetric::manhattan;
  if (text == "chebyshev" || text == "maximum") return StateMetric::chebyshev;
  invalid_argument("unknown state metric '" + text + "' (euclidean, manhattan, chebyshev)");
}

Network tsnet_rn(const TimeSeries& series, const EmbeddingSpec& spec) {
  if (spec.dimension < 1 || spec.delay < 1) invalid_argument("embedding dimension and delay must be >= 1");
  if (!(spec.radius > 0.0)) invalid_argument("recurrence radius must be > 0");
  const std::size_t reach = (spec.dimension - 1) * spec.delay;
  if (series.size() < reach + 2) {
    invalid_argument("recurrence network with dimension " + std::to_string(spec.dimension) +
                     " and delay " + std::to_string(spec.delay) + " needs at least " +
                     std::to_string(reach + 2) + " values, got " + std::to_string(series.size()));
  }
  const std::size_t states = series.size() - reach;
  auto distance = [&](std::size_t a, std::size_t b) {
    double acc = 0.0;
    for (std::size_t c = 0; c < spec.dimension; ++c) {
      const double diff = std::abs(series[a + c * spec.delay] - series[b + c * spec.delay]);
      switch (spec.metric) {
        case StateMetric::euclidean: acc += diff * diff; break;
        case StateMetric::manhattan: acc += diff; break;
        case StateMetric::chebyshev: acc = std::max(acc, diff); break;
      }
    }
    return spec.metric == StateMetric::euclidean ? std::sqrt(acc) : acc;
  };
  Network net(index_labels(states), false, false);
  for (std::size_t i = 0; i < states; ++i) {
    for (std::size_t j = i + 1; j < states; ++j) {
      if (distance(i, j) <= spec.radius) net.add_edge(i, j);
    }
  }
  return net;
}

Network tsnet_windows(const TimeSeries& series, std::size_t width, std::size_t step,
                      const Kernel& kernel, const NetworkBuilder& builder, std::size_t workers) {
  const auto set = ts_to_windows(series, width, step);
  std::vector<TimeSeries> windows;
  windows.reserve(set.windows.size());
  for (std::size_t k = 0; k < set.windows.size(); ++k) {
    auto v = set.windows[k].values();
    windows.emplace_back(std::to_string(set.starts[k]), std::vector<double>(v.begin(), v.end()));
  }
  if (windows.size() == 1) return builder(DistanceMatrix({windows.front().id()}));
  return builder(ts_dist(windows, kernel, workers));
}

}  // namespace tsnet
