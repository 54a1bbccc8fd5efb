#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>

#include "tsnet/error.hpp"
#include "tsnet/graph.hpp"

namespace tsnet {

namespace {

// Undirected adjacency as (neighbour, edge index) lists, skipping removed edges.
using Adjacency = std::vector<std::vector<std::pair<std::size_t, std::size_t>>>;

Adjacency undirected_adjacency(const Network& net, const std::vector<bool>& alive) {
  Adjacency adj(net.size());
  const auto& edges = net.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (!alive[e]) continue;
    adj[edges[e].source].emplace_back(edges[e].target, e);
    if (edges[e].source != edges[e].target) adj[edges[e].target].emplace_back(edges[e].source, e);
  }
  return adj;
}

std::vector<std::size_t> components_of(const Adjacency& adj) {
  constexpr auto unset = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> comp(adj.size(), unset);
  std::size_t next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (comp[s] != unset) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (auto [w, e] : adj[v]) {
        if (comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

// Brandes accumulation restricted to live edges.
std::vector<double> betweenness(const Adjacency& adj, std::size_t edge_total) {
  const std::size_t n = adj.size();
  std::vector<double> score(edge_total, 0.0);
  std::vector<double> sigma(n), delta(n);
  std::vector<long long> dist(n);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    order.clear();
    sigma[s] = 1.0;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      order.push_back(v);
      for (auto [w, e] : adj[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const std::size_t w = *it;
      for (auto [v, e] : adj[w]) {
        if (dist[v] == dist[w] - 1) {
          const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
          score[e] += c;
          delta[v] += c;
        }
      }
    }
  }
  // Every unordered pair was visited from both ends.
  for (auto& v : score) v *= 0.5;
  return score;
}

std::size_t count_of(const std::vector<std::size_t>& comp) {
  return comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
}

}  // namespace

std::vector<std::size_t> connected_components(const Network& net) {
  return components_of(undirected_adjacency(net, std::vector<bool>(net.edge_count(), true)));
}

GraphStats graph_stats(const Network& net) {
  GraphStats s;
  s.nodes = net.size();
  s.edges = net.edge_count();
  s.degrees.assign(net.size(), 0);
  std::size_t proper = 0;
  for (const auto& e : net.edges()) {
    ++s.degrees[e.source];
    ++s.degrees[e.target];
    if (e.source != e.target) ++proper;
  }
  if (s.nodes >= 2) {
    const double pairs = static_cast<double>(s.nodes) * static_cast<double>(s.nodes - 1);
    s.density = (net.directed() ? 1.0 : 2.0) * static_cast<double>(proper) / pairs;
  }
  const auto comp = connected_components(net);
  s.components = count_of(comp);
  s.component_sizes.assign(s.components, 0);
  for (std::size_t c : comp) ++s.component_sizes[c];
  return s;
}

std::vector<double> edge_betweenness(const Network& net) {
  if (net.directed()) invalid_argument("edge betweenness is implemented for undirected networks");
  return betweenness(undirected_adjacency(net, std::vector<bool>(net.edge_count(), true)),
                     net.edge_count());
}

double modularity(const Network& net, const std::vector<std::size_t>& membership) {
  if (membership.size() != net.size()) invalid_argument("membership size does not match the network");
  const double m = static_cast<double>(net.edge_count());
  if (net.edge_count() == 0) return 0.0;
  const std::size_t groups = count_of(membership);
  std::vector<double> inside(groups, 0.0), degree(groups, 0.0);
  for (const auto& e : net.edges()) {
    degree[membership[e.source]] += 1.0;
    degree[membership[e.target]] += 1.0;
    if (membership[e.source] == membership[e.target]) inside[membership[e.source]] += 1.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < groups; ++c) {
    const double share = degree[c] / (2.0 * m);
    q += inside[c] / m - share * share;
  }
  return q;
}

CommunityPartition girvan_newman(const Network& net) {
  if (net.directed()) invalid_argument("community detection needs an undirected network");
  const auto& edges = net.edges();
  std::vector<bool> alive(edges.size(), true);

  auto adj = undirected_adjacency(net, alive);
  auto comp = components_of(adj);
  CommunityPartition best{comp, modularity(net, comp), count_of(comp), 0};
  std::size_t components = best.communities;

  for (std::size_t removed = 1; removed <= edges.size(); ++removed) {
    const auto score = betweenness(adj, edges.size());
    double top = -1.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (alive[e]) top = std::max(top, score[e]);
    }
    // Sums of path fractions differ in the last bits between mathematically
    // tied edges; treat them as tied and take the lowest (source, target).
    const double tol = 1e-9 * std::max(1.0, top);
    std::size_t pick = edges.size();
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (alive[e] && score[e] >= top - tol) {
        pick = e;
        break;
      }
    }
    alive[pick] = false;
    adj = undirected_adjacency(net, alive);
    comp = components_of(adj);
    const std::size_t now = count_of(comp);
    if (now == components) continue;
    components = now;
    const double q = modularity(net, comp);
    if (q > best.modularity + 1e-12) best = {comp, q, now, removed};
  }
  return best;
}

}  // namespace tsnet
