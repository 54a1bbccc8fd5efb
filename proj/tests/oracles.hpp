// Reference implementations used to cross-check the library in tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "tsnet/series.hpp"

namespace oracle {

inline tsnet::TimeSeries ts(std::vector<double> v, std::string id = "x") {
  return tsnet::TimeSeries(std::move(id), std::move(v));
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

// Textbook two-pass Pearson coefficient.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    mx += x[t];
    my += y[t];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    sxy += (x[t] - mx) * (y[t] - my);
    sxx += (x[t] - mx) * (x[t] - mx);
    syy += (y[t] - my) * (y[t] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double entropy(const std::vector<int>& s) {
  std::map<int, double> counts;
  for (int v : s) counts[v] += 1.0;
  double h = 0.0;
  for (const auto& [v, c] : counts) {
    const double p = c / static_cast<double>(s.size());
    h -= p * std::log(p);
  }
  return h;
}

// Minimum over every monotone warping path from (0,0) to (n-1,m-1).
inline double dtw_exhaustive(const std::vector<double>& x, const std::vector<double>& y) {
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    acc += std::abs(x[i] - y[j]);
    if (i + 1 == x.size() && j + 1 == y.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i + 1 < x.size()) walk(i + 1, j, acc);
    if (j + 1 < y.size()) walk(i, j + 1, acc);
    if (i + 1 < x.size() && j + 1 < y.size()) walk(i + 1, j + 1, acc);
  };
  walk(0, 0, 0.0);
  return best;
}

// Natural visibility by checking every intermediate bar against the line of sight.
inline bool natural_visible(std::span<const double> x, std::size_t a, std::size_t b) {
  for (std::size_t c = a + 1; c < b; ++c) {
    const double line = x[b] + (x[a] - x[b]) * static_cast<double>(b - c) / static_cast<double>(b - a);
    if (!(x[c] < line)) return false;
  }
  return true;
}

inline bool horizontal_visible(std::span<const double> x, std::size_t a, std::size_t b) {
  for (std::size_t c = a + 1; c < b; ++c) {
    if (!(x[c] < std::min(x[a], x[b]))) return false;
  }
  return true;
}

// Weak components by repeated label propagation over an edge list.
inline std::size_t component_count(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::size_t> label(n);
  for (std::size_t k = 0; k < n; ++k) label[k] = k;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto [u, v] : edges) {
      const std::size_t m = std::min(label[u], label[v]);
      if (label[u] != m || label[v] != m) {
        label[u] = label[v] = m;
        changed = true;
      }
    }
  }
  std::sort(label.begin(), label.end());
  return static_cast<std::size_t>(std::unique(label.begin(), label.end()) - label.begin());
}

}  // namespace oracle
