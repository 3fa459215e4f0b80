#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cyclecover/cover.hpp"
#include "cyclecover/instance.hpp"
#include "cyclecover/sweep.hpp"

namespace cyclecover {

class limit_exceeded_error : public std::runtime_error {
 public:
  explicit limit_exceeded_error(const std::string& what)
      : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Held-Karp dynamic program. The table covers every subset of the points, so
// one fill powers the plain TSP query, the disjoint two-cycle scan and the
// cycle-plus-ear search below.
// ---------------------------------------------------------------------------

namespace detail {

template <CostGraph G>
struct HeldKarpTable {
  const G& g;
  int n;  // number of non-root points; point p <-> bit (p - 1)
  std::vector<double> dp;        // dp[mask * n + (e - 1)]
  std::vector<std::uint8_t> parent;

  explicit HeldKarpTable(const G& graph)
      : g(graph), n(graph.node_count() - 1) {
    if (n > 19)
      throw limit_exceeded_error("held_karp: more than 20 nodes");
    const std::size_t size = (std::size_t{1} << n) * std::max(n, 1);
    dp.assign(size, std::numeric_limits<double>::infinity());
    parent.assign(size, 0);
    for (int e = 1; e <= n; ++e)
      dp[idx(std::uint32_t{1} << (e - 1), e)] = g.cost(0, e);
    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      for (int e = 1; e <= n; ++e) {
        if (!(mask & (std::uint32_t{1} << (e - 1)))) continue;
        double base = dp[idx(mask, e)];
        if (base == std::numeric_limits<double>::infinity()) continue;
        for (int q = 1; q <= n; ++q) {
          if (mask & (std::uint32_t{1} << (q - 1))) continue;
          std::uint32_t next = mask | (std::uint32_t{1} << (q - 1));
          double cand = base + g.cost(e, q);
          if (cand < dp[idx(next, q)]) {
            dp[idx(next, q)] = cand;
            parent[idx(next, q)] = static_cast<std::uint8_t>(e);
          }
        }
      }
    }
  }

  std::size_t idx(std::uint32_t mask, int e) const {
    return static_cast<std::size_t>(mask) * n + (e - 1);
  }

  // Cheapest closed tour root -> mask -> root.
  std::pair<double, int> tour(std::uint32_t mask) const {
    double best = std::numeric_limits<double>::infinity();
    int best_end = 0;
    for (int e = 1; e <= n; ++e) {
      if (!(mask & (std::uint32_t{1} << (e - 1)))) continue;
      double cand = dp[idx(mask, e)] + g.cost(e, 0);
      if (cand < best) {
        best = cand;
        best_end = e;
      }
    }
    return {best, best_end};
  }

  // Cost of mask as a single cycle of the cover: a one-point mask is the
  // degenerate out-and-back whose single link is paid once.
  std::pair<double, int> cycle(std::uint32_t mask) const {
    if (std::popcount(mask) == 1) {
      int p = std::countr_zero(mask) + 1;
      return {g.cost(0, p), p};
    }
    return tour(mask);
  }

  // Path root -> ... -> end visiting mask, reconstructed from parents.
  std::vector<int> path(std::uint32_t mask, int end) const {
    std::vector<int> out;
    while (end != 0) {
      out.push_back(end);
      int prev = parent[idx(mask, end)];
      mask &= ~(std::uint32_t{1} << (end - 1));
      end = prev;
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

}  // namespace detail

struct TspResult {
  std::vector<int> tour;  // starts at the root
  double length = 0.0;
};

/// Exact TSP over all nodes (root included) by bitmask dynamic programming.
/// Limit: 20 nodes.
template <CostGraph G>
TspResult held_karp_tsp(const G& g) {
  const int n = g.node_count() - 1;
  if (n == 0) return {{0}, 0.0};
  if (n == 1) return {{0, 1}, 2.0 * g.cost(0, 1)};
  detail::HeldKarpTable<G> table(g);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  auto [length, end] = table.tour(full);
  TspResult result;
  result.length = length;
  result.tour.push_back(0);
  for (int v : table.path(full, end)) result.tour.push_back(v);
  return result;
}

// ---------------------------------------------------------------------------
// Best cover by at most two cycles. Exact over three families:
//   - a single optimal tour,
//   - two node-disjoint cycles sharing only the root,
//   - cycle-plus-ear: an optimal tour over a subset K plus a path over the
//     remaining points anchored at two nodes of K; the second cycle reuses
//     the root-side arc of the first, whose links are paid once.
// The third family is what lets overlapping cycles undercut the single tour.
// ---------------------------------------------------------------------------

struct TwoCycleResult {
  double cost = 0.0;
  double single_cycle_length = 0.0;
  CycleCover cover;
  std::string shape;  // "single", "disjoint" or "ear"
};

template <CostGraph G>
TwoCycleResult best_two_cycle_cover(const G& g) {
  const int n = g.node_count() - 1;
  if (n < 1) throw std::invalid_argument("best_two_cycle_cover: no points");
  detail::HeldKarpTable<G> table(g);
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;

  TwoCycleResult result;
  auto [single, single_end] = table.tour(full);
  result.single_cycle_length = single;
  // As a cover, one cycle pays each link once; only the n == 1 degenerate
  // case differs from the tour length.
  result.cost = table.cycle(full).first;
  result.shape = "single";
  std::vector<std::vector<int>> best_cycles{table.path(full, single_end)};

  // Two cycles over disjoint point sets.
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    std::uint32_t rest = full & ~mask;
    if (mask > rest) continue;  // unordered pair
    auto [ca, ea] = table.cycle(mask);
    auto [cb, eb] = table.cycle(rest);
    if (ca + cb < result.cost - 1e-12) {
      result.cost = ca + cb;
      result.shape = "disjoint";
      best_cycles = {std::popcount(mask) == 1 ? std::vector<int>{ea}
                                              : table.path(mask, ea),
                     std::popcount(rest) == 1 ? std::vector<int>{eb}
                                              : table.path(rest, eb)};
    }
  }

  // Cycle plus ear. For each anchor x, run one path DP from x over subsets
  // of the other points; every (subset T, far anchor y) yields the cover
  // tour(V \ T) + path x -> T -> y.
  for (int x = 0; x <= n && n >= 3; ++x) {
    std::vector<int> eligible;
    for (int p = 1; p <= n; ++p)
      if (p != x) eligible.push_back(p);
    const int m = static_cast<int>(eligible.size());
    const std::uint32_t efull = (std::uint32_t{1} << m) - 1;
    std::vector<double> pdp(
        (std::size_t{1} << m) * m,
        std::numeric_limits<double>::infinity());
    std::vector<std::uint8_t> pparent((std::size_t{1} << m) * m, 0);
    auto pidx = [&](std::uint32_t mask, int e) {
      return static_cast<std::size_t>(mask) * m + e;
    };
    for (int e = 0; e < m; ++e)
      pdp[pidx(std::uint32_t{1} << e, e)] = g.cost(x, eligible[e]);
    for (std::uint32_t mask = 1; mask <= efull; ++mask)
      for (int e = 0; e < m; ++e) {
        if (!(mask & (std::uint32_t{1} << e))) continue;
        double base = pdp[pidx(mask, e)];
        if (base == std::numeric_limits<double>::infinity()) continue;
        for (int q = 0; q < m; ++q) {
          if (mask & (std::uint32_t{1} << q)) continue;
          std::uint32_t next = mask | (std::uint32_t{1} << q);
          double cand = base + g.cost(eligible[e], eligible[q]);
          if (cand < pdp[pidx(next, q)]) {
            pdp[pidx(next, q)] = cand;
            pparent[pidx(next, q)] = static_cast<std::uint8_t>(e);
          }
        }
      }

    for (std::uint32_t tmask = 1; tmask <= efull; ++tmask) {
      // point-space mask of T
      std::uint32_t t_points = 0;
      for (int e = 0; e < m; ++e)
        if (tmask & (std::uint32_t{1} << e))
          t_points |= std::uint32_t{1} << (eligible[e] - 1);
      std::uint32_t kmask = full & ~t_points;
      if (std::popcount(kmask) < 2) continue;  // K must be a proper cycle
      double ktour = table.tour(kmask).first;
      if (ktour >= result.cost) continue;
      for (int ye = 0; ye < m; ++ye) {
        int y = eligible[ye];
        if (t_points & (std::uint32_t{1} << (y - 1))) continue;
        if (!(kmask & (std::uint32_t{1} << (y - 1)))) continue;
        double best_path = std::numeric_limits<double>::infinity();
        int best_end = -1;
        for (int e = 0; e < m; ++e) {
          if (!(tmask & (std::uint32_t{1} << e))) continue;
          double cand = pdp[pidx(tmask, e)] + g.cost(eligible[e], y);
          if (cand < best_path) {
            best_path = cand;
            best_end = e;
          }
        }
        if (best_end < 0) continue;
        double total = ktour + best_path;
        if (total < result.cost - 1e-12) {
          result.cost = total;
          result.shape = "ear";
          // reconstruct K tour and the ear path
          auto [kc, kend] = table.tour(kmask);
          (void)kc;
          std::vector<int> ktour_nodes = table.path(kmask, kend);
          std::vector<int> ear;
          {
            std::uint32_t mask = tmask;
            int e = best_end;
            while (true) {
              ear.push_back(eligible[e]);
              std::uint32_t without = mask & ~(std::uint32_t{1} << e);
              if (without == 0) break;
              e = pparent[pidx(mask, e)];
              mask = without;
            }
            std::reverse(ear.begin(), ear.end());  // x-side first
          }
          // C2 = root .. x (along K), ear, y .. root (along K)
          std::vector<int> tour_order{0};
          for (int v : ktour_nodes) tour_order.push_back(v);
          int px = 0, py = 0;
          for (std::size_t i = 0; i < tour_order.size(); ++i) {
            if (tour_order[i] == x) px = static_cast<int>(i);
            if (tour_order[i] == y) py = static_cast<int>(i);
          }
          if (px > py) {
            std::swap(px, py);
            std::reverse(ear.begin(), ear.end());
          }
          std::vector<int> second;
          for (int i = 1; i <= px; ++i) second.push_back(tour_order[i]);
          for (int v : ear) second.push_back(v);
          for (std::size_t i = py; i < tour_order.size(); ++i)
            second.push_back(tour_order[i]);
          best_cycles = {ktour_nodes, second};
        }
      }
    }
  }

  result.cover = make_cover(g, best_cycles);
  return result;
}

// ---------------------------------------------------------------------------
// Exact RDCMCCC by branch and bound over the undirected edges of the
// complete graph, in ascending cost order. The admissible bound combines the
// committed cost with a degree-deficiency completion estimate; a sweep
// solution (when available and feasible under the requested mode) seeds the
// incumbent.
// ---------------------------------------------------------------------------

struct ExactOptions {
  int limit = 7;          // maximum number of points (root excluded)
  double initial_upper = std::numeric_limits<double>::infinity();
};

struct ExactResult {
  bool feasible = false;
  EdgeSet edges;
  double cost = std::numeric_limits<double>::infinity();
};

namespace detail {

template <CostGraph G>
class ExactSearch {
 public:
  ExactSearch(const G& g, VerifyMode mode, double upper)
      : g_(g), mode_(mode), best_cost_(upper) {
    const int n = g.node_count();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) edges_.push_back({i, j, g.cost(i, j)});
    std::sort(edges_.begin(), edges_.end(),
              [](const Edge& a, const Edge& b) {
                if (a.cost != b.cost) return a.cost < b.cost;
                return std::pair(a.i, a.j) < std::pair(b.i, b.j);
              });
    // required incident edges per pmu node under this mode's cheapest cycle
    required_.assign(n, 0);
    for (int u : g.pmu()) {
      bool degen_ok = mode != VerifyMode::cycle_delta_strict &&
                      (mode == VerifyMode::path_delta
                           ? g.delay(0, u) <= g.delta() + 1e-9
                           : 2.0 * g.delay(0, u) <= g.delta() + 1e-9);
      required_[u] = degen_ok ? 1 : 2;
    }
  }

  ExactResult run() {
    const std::uint64_t all = (edges_.size() == 64)
                                  ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << edges_.size()) - 1;
    if (!feasible(all)) return {};
    recurse(0, 0, 0.0);
    ExactResult result;
    if (found_) {
      result.feasible = true;
      result.cost = best_cost_;
      result.edges = to_edge_set(best_mask_);
    }
    return result;
  }

 private:
  struct Edge {
    int i, j;
    double cost;
  };

  void recurse(std::size_t idx, std::uint64_t included, double cost) {
    if (cost >= best_cost_ - 1e-12) return;
    if (cost + completion_bound(idx, included) >= best_cost_ - 1e-12) return;
    if (feasible(included)) {
      best_cost_ = cost;
      best_mask_ = included;
      found_ = true;
      return;
    }
    if (idx == edges_.size()) return;

    // include edges_[idx]
    recurse(idx + 1, included | (std::uint64_t{1} << idx),
            cost + edges_[idx].cost);
    // exclude it, provided some completion without it stays feasible
    std::uint64_t potential = included;
    for (std::size_t k = idx + 1; k < edges_.size(); ++k)
      potential |= std::uint64_t{1} << k;
    if (feasible(potential)) recurse(idx + 1, included, cost);
  }

  // Admissible completion bound: every pmu node still short of its required
  // degree needs that many more incident edges, each shared by at most two
  // nodes. Uses the cheapest undecided incident edge per node.
  double completion_bound(std::size_t idx, std::uint64_t included) const {
    std::vector<int> degree(g_.node_count(), 0);
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (included & (std::uint64_t{1} << k)) {
        ++degree[edges_[k].i];
        ++degree[edges_[k].j];
      }
    double bound = 0.0;
    for (int u : g_.pmu()) {
      int need = required_[u] - degree[u];
      if (need <= 0) continue;
      double cheapest = std::numeric_limits<double>::infinity();
      int available = 0;
      for (std::size_t k = idx; k < edges_.size(); ++k)
        if (edges_[k].i == u || edges_[k].j == u) {
          cheapest = std::min(cheapest, edges_[k].cost);
          ++available;
        }
      if (available < need)
        return std::numeric_limits<double>::infinity();
      bound += need * cheapest / 2.0;
    }
    return bound;
  }

  bool feasible(std::uint64_t mask) {
    auto it = cache_.find(mask);
    if (it != cache_.end()) return it->second;
    bool ok = verify_cover(g_, to_edge_set(mask), mode_).feasible;
    cache_.emplace(mask, ok);
    return ok;
  }

  EdgeSet to_edge_set(std::uint64_t mask) const {
    EdgeSet set;
    for (std::size_t k = 0; k < edges_.size(); ++k)
      if (mask & (std::uint64_t{1} << k)) set.add(edges_[k].i, edges_[k].j);
    return set;
  }

  const G& g_;
  VerifyMode mode_;
  std::vector<Edge> edges_;
  std::vector<int> required_;
  std::unordered_map<std::uint64_t, bool> cache_;
  double best_cost_;
  std::uint64_t best_mask_ = 0;
  bool found_ = false;
};

}  // namespace detail

/// Minimum-cost subgraph in which every PMU node is feasible under the
/// requested mode. Desk-scale only: throws limit_exceeded_error beyond
/// options.limit points.
template <CostGraph G>
ExactResult exact_rdcmccc(const G& g, VerifyMode mode = VerifyMode::cycle_delta,
                          ExactOptions options = {}) {
  if (g.node_count() - 1 > options.limit)
    throw limit_exceeded_error("exact_rdcmccc: " +
                               std::to_string(g.node_count() - 1) +
                               " points exceeds limit " +
                               std::to_string(options.limit));
  double upper = options.initial_upper;
  if constexpr (std::is_same_v<G, Instance>) {
    // Seed the incumbent with SWEEP whenever its cover is feasible under the
    // requested mode.
    try {
      CycleCover sweep = sweep_solve(g);
      // Slack keeps the incumbent from pruning an optimum equal to it.
      if (verify_cover(g, sweep, mode).feasible)
        upper = std::min(upper, sweep.cost + 1e-9);
    } catch (const infeasible_error&) {
    }
  }
  detail::ExactSearch<G> search(g, mode, upper);
  return search.run();
}

// ---------------------------------------------------------------------------
// Benchmark layout for the multi-cycle-beats-single-tour effect: twelve
// collinear points (x/6, 0) for x = -5..6 plus the eight distinct unit-circle
// points. (0, 0) serves as the root; the shared point (1, 0) is stored once.
// 19 nodes in total.
// ---------------------------------------------------------------------------

inline Instance observation1_instance() {
  std::vector<Point> pts;
  for (int x = -5; x <= 6; ++x)
    if (x != 0) pts.push_back(Point{x / 6.0, 0.0});
  for (int theta = 1; theta < 8; ++theta) {
    double a = 2.0 * std::numbers::pi * theta / 8.0;
    pts.push_back(Point{std::cos(a), std::sin(a)});
  }
  return Instance(Point{0.0, 0.0}, pts,
                  std::numeric_limits<double>::infinity(), 1);
}

// ---------------------------------------------------------------------------
// Hamiltonian-cycle reduction.
// ---------------------------------------------------------------------------

struct HcGraph {
  int n = 0;
  std::vector<std::vector<bool>> adjacency;
};

/// Edge-list text, one `u v` pair per line, 0-based; `#` comments ignored.
/// The node count is one past the largest index mentioned.
inline HcGraph read_hc_graph(const std::string& text) {
  HcGraph g;
  std::vector<std::pair<int, int>> edges;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    std::stringstream row(line);
    int u, v;
    if (!(row >> u >> v) || u < 0 || v < 0 || u == v)
      throw std::runtime_error("read_hc_graph: malformed edge line: " + line);
    edges.emplace_back(u, v);
    g.n = std::max(g.n, std::max(u, v) + 1);
  }
  g.adjacency.assign(g.n, std::vector<bool>(g.n, false));
  for (auto [u, v] : edges) g.adjacency[u][v] = g.adjacency[v][u] = true;
  return g;
}

/// Complete weighted graph of the reduction: weight 1 on the edges of g,
/// weight 2 elsewhere; gamma = |V|; delta unbounded. Models CostGraph with
/// node 0 (the graph's first node) as the root.
struct HcInstance {
  std::vector<std::vector<double>> w;
  std::vector<int> pmu_nodes;

  int node_count() const { return static_cast<int>(w.size()); }
  double cost(int i, int j) const { return w[i][j]; }
  double delay(int i, int j) const { return w[i][j]; }
  const std::vector<int>& pmu() const { return pmu_nodes; }
  double delta() const { return std::numeric_limits<double>::infinity(); }
};

struct HcReduction {
  HcInstance graph;
  double gamma = 0.0;
};

inline HcReduction hc_reduce(const HcGraph& g) {
  HcReduction red;
  red.gamma = g.n;
  red.graph.w.assign(g.n, std::vector<double>(g.n, 2.0));
  for (int i = 0; i < g.n; ++i) {
    red.graph.w[i][i] = 0.0;
    for (int j = 0; j < g.n; ++j)
      if (i != j && g.adjacency[i][j]) red.graph.w[i][j] = 1.0;
  }
  for (int i = 1; i < g.n; ++i) red.graph.pmu_nodes.push_back(i);
  return red;
}

/// Hamiltonicity via the reduction: g is Hamiltonian iff the strict-cycle
/// RDCMCCC optimum on the reduced graph costs at most gamma = |V|. Multi
/// cycle covers are ruled out by the edge-count bound, so only a Hamiltonian
/// cycle can meet the budget.
inline bool decide_hc(const HcGraph& g, int limit = 7) {
  if (g.n <= 1) return true;
  if (g.n == 2) return false;
  HcReduction red = hc_reduce(g);
  ExactOptions options;
  options.limit = limit;
  auto result =
      exact_rdcmccc(red.graph, VerifyMode::cycle_delta_strict, options);
  return result.feasible && result.cost <= red.gamma + 1e-9;
}

}  // namespace cyclecover
