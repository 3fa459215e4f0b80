#pragma once

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "cyclecover/cover.hpp"
#include "cyclecover/instance.hpp"

namespace cyclecover {

struct MstResult {
  EdgeSet edges;
  double weight = 0.0;
};

/// Minimum spanning tree over all nodes, greedy edge (Kruskal) with a
/// union-find over the complete graph.
template <CostGraph G>
MstResult mst(const G& g) {
  const int n = g.node_count();
  std::vector<std::tuple<double, int, int>> all;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) all.emplace_back(g.cost(i, j), i, j);
  std::sort(all.begin(), all.end());

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };

  MstResult result;
  for (const auto& [w, i, j] : all) {
    int a = find(i), b = find(j);
    if (a == b) continue;
    parent[a] = b;
    result.edges.add(i, j);
    result.weight += w;
    if (result.edges.size() + 1 == static_cast<std::size_t>(n)) break;
  }
  return result;
}

struct MatchingResult {
  std::vector<std::pair<int, int>> pairs;
  double weight = 0.0;
  bool exact = true;  // false when the greedy fallback ran
};

/// Minimum-weight perfect matching on an even node set. Exact bitmask DP up
/// to 18 nodes; beyond that a greedy nearest-pair fallback, flagged as
/// non-optimal in the result.
template <typename CostFn>
MatchingResult min_weight_perfect_matching(const std::vector<int>& nodes,
                                           CostFn&& cost) {
  if (nodes.size() % 2 != 0)
    throw std::invalid_argument("matching: odd node count");
  MatchingResult result;
  const int m = static_cast<int>(nodes.size());
  if (m == 0) return result;

  if (m <= 18) {
    // dp[mask] = cheapest perfect matching of the nodes in mask; the lowest
    // set bit is always matched first, which makes the recurrence unique.
    const int full = (1 << m) - 1;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(static_cast<std::size_t>(full) + 1, kInf);
    std::vector<int> choice(static_cast<std::size_t>(full) + 1, -1);
    dp[0] = 0.0;
    for (int mask = 1; mask <= full; ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) % 2 != 0) continue;
      int first = std::countr_zero(static_cast<unsigned>(mask));
      for (int second = first + 1; second < m; ++second) {
        if (!(mask & (1 << second))) continue;
        int rest = mask ^ (1 << first) ^ (1 << second);
        if (dp[rest] == kInf) continue;
        double w = dp[rest] + cost(nodes[first], nodes[second]);
        if (w < dp[mask]) {
          dp[mask] = w;
          choice[mask] = second;
        }
      }
    }
    int mask = full;
    while (mask) {
      int first = std::countr_zero(static_cast<unsigned>(mask));
      int second = choice[mask];
      result.pairs.emplace_back(nodes[first], nodes[second]);
      result.weight += cost(nodes[first], nodes[second]);
      mask ^= (1 << first) | (1 << second);
    }
    return result;
  }

  // Greedy nearest pair for large odd sets; keeps Christofides usable but
  // downgrades its guarantee (callers see exact == false).
  result.exact = false;
  std::vector<int> left = nodes;
  while (!left.empty()) {
    int a = left.front();
    std::size_t best = 1;
    for (std::size_t k = 2; k < left.size(); ++k)
      if (cost(a, left[k]) < cost(a, left[best])) best = k;
    result.pairs.emplace_back(a, left[best]);
    result.weight += cost(a, left[best]);
    left.erase(left.begin() + best);
    left.erase(left.begin());
  }
  return result;
}

struct Tour {
  std::vector<int> order;  // starts at the root, each node once
  double length = 0.0;
  bool matching_exact = true;
};

namespace detail {

template <CostGraph G>
double tour_length(const G& g, const std::vector<int>& order) {
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i)
    len += g.cost(order[i], order[i + 1]);
  len += g.cost(order.back(), order.front());
  return len;
}

// Hierholzer circuit over an adjacency multiset, then shortcut to the first
// occurrence of each node. Valid under the triangle inequality.
template <CostGraph G>
Tour shortcut_eulerian(const G& g,
                       std::vector<std::vector<int>> multi_adjacency) {
  const int n = g.node_count();
  std::vector<int> circuit;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    if (multi_adjacency[v].empty()) {
      circuit.push_back(v);
      stack.pop_back();
    } else {
      int w = multi_adjacency[v].back();
      multi_adjacency[v].pop_back();
      auto it = std::find(multi_adjacency[w].begin(),
                          multi_adjacency[w].end(), v);
      multi_adjacency[w].erase(it);
      stack.push_back(w);
    }
  }

  Tour tour;
  std::vector<bool> seen(n, false);
  for (int v : circuit)
    if (!seen[v]) {
      seen[v] = true;
      tour.order.push_back(v);
    }
  tour.length = tour_length(g, tour.order);
  return tour;
}

}  // namespace detail

/// Christofides: MST, exact minimum matching on its odd-degree nodes,
/// Eulerian circuit, shortcut. With an exact matching the tour is at most
/// 1.5x the optimal tour length.
template <CostGraph G>
Tour christofides_tour(const G& g) {
  const int n = g.node_count();
  if (n < 3) throw std::invalid_argument("christofides_tour: need >= 3 nodes");

  MstResult tree = mst(g);
  std::vector<int> degree(n, 0);
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& [i, j] : tree.edges) {
    ++degree[i];
    ++degree[j];
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  std::vector<int> odd;
  for (int v = 0; v < n; ++v)
    if (degree[v] % 2 == 1) odd.push_back(v);

  auto matching = min_weight_perfect_matching(
      odd, [&](int a, int b) { return g.cost(a, b); });
  for (const auto& [a, b] : matching.pairs) {
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
  }

  Tour tour = detail::shortcut_eulerian(g, std::move(adjacency));
  tour.matching_exact = matching.exact;
  return tour;
}

/// Double-tree 2-approximation: DFS preorder of the MST from the root,
/// shortcut. Companion bound for instances whose odd set is too large for
/// the exact matching.
template <CostGraph G>
Tour double_tree_tour(const G& g) {
  const int n = g.node_count();
  if (n < 3) throw std::invalid_argument("double_tree_tour: need >= 3 nodes");

  MstResult tree = mst(g);
  std::vector<std::vector<int>> adjacency(n);
  for (const auto& [i, j] : tree.edges) {
    adjacency[i].push_back(j);
    adjacency[j].push_back(i);
  }
  for (auto& neighbors : adjacency)
    std::sort(neighbors.begin(), neighbors.end());

  Tour tour;
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = true;
    tour.order.push_back(v);
    for (auto it = adjacency[v].rbegin(); it != adjacency[v].rend(); ++it)
      if (!seen[*it]) stack.push_back(*it);
  }
  tour.length = detail::tour_length(g, tour.order);
  return tour;
}

/// Present a tour as a one-cycle design when it fits delta; otherwise there
/// is no design, only the length bound (callers decide how to report it).
template <CostGraph G>
std::optional<CycleCover> tour_as_design(const G& g, const Tour& tour) {
  if (tour.length > g.delta() + 1e-9) return std::nullopt;
  std::vector<int> cycle(tour.order.begin() + 1, tour.order.end());
  if (cycle.empty()) return std::nullopt;
  return make_cover(g, {cycle});
}

}  // namespace cyclecover
