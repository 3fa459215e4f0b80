#pragma once

#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace cyclecover::detail {

// Successive-shortest-path min-cost flow with Johnson potentials. Costs must
// be nonnegative; unit capacities are all this project needs but arbitrary
// integer capacities are supported. Parallel arcs are fine (edge list
// representation).
class MinCostFlow {
 public:
  explicit MinCostFlow(int node_count) : head_(node_count, -1) {}

  int node_count() const { return static_cast<int>(head_.size()); }

  // Returns the arc id; the paired reverse arc is id ^ 1.
  int add_arc(int from, int to, int capacity, double cost) {
    int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, head_[from], capacity, cost});
    head_[from] = id;
    arcs_.push_back({from, head_[to], 0, -cost});
    head_[to] = id + 1;
    return id;
  }

  struct Result {
    int flow = 0;
    double cost = 0.0;
  };

  // Push up to max_flow units from s to t, stopping early when t becomes
  // unreachable. Augments one shortest path at a time (unit-capacity graphs
  // augment a single unit per round).
  Result solve(int s, int t, int max_flow) {
    Result res;
    std::vector<double> potential(head_.size(), 0.0);
    while (res.flow < max_flow) {
      auto [dist, parent_arc] = dijkstra(s, potential);
      if (dist[t] == kInf) break;
      for (std::size_t v = 0; v < head_.size(); ++v)
        if (dist[v] < kInf) potential[v] += dist[v];

      int push = max_flow - res.flow;
      for (int v = t; v != s;) {
        push = std::min(push, arcs_[parent_arc[v]].capacity);
        v = arcs_[parent_arc[v] ^ 1].to;
      }
      for (int v = t; v != s;) {
        Arc& a = arcs_[parent_arc[v]];
        a.capacity -= push;
        arcs_[parent_arc[v] ^ 1].capacity += push;
        res.cost += push * a.cost;
        v = arcs_[parent_arc[v] ^ 1].to;
      }
      res.flow += push;
    }
    return res;
  }

  // Remaining capacity of an arc (0 on a saturated unit arc).
  int capacity(int arc_id) const { return arcs_[arc_id].capacity; }

  // Flow pushed through a forward arc == capacity accumulated on its twin.
  int flow(int arc_id) const { return arcs_[arc_id ^ 1].capacity; }

 private:
  struct Arc {
    int to;
    int next;
    int capacity;
    double cost;
  };

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::pair<std::vector<double>, std::vector<int>> dijkstra(
      int s, const std::vector<double>& potential) const {
    std::vector<double> dist(head_.size(), kInf);
    std::vector<int> parent_arc(head_.size(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[s] = 0.0;
    pq.emplace(0.0, s);
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (int id = head_[v]; id != -1; id = arcs_[id].next) {
        const Arc& a = arcs_[id];
        if (a.capacity <= 0) continue;
        double nd = d + a.cost + potential[v] - potential[a.to];
        if (nd < dist[a.to] - 1e-15) {
          dist[a.to] = nd;
          parent_arc[a.to] = id;
          pq.emplace(nd, a.to);
        }
      }
    }
    return {std::move(dist), std::move(parent_arc)};
  }

  std::vector<int> head_;
  std::vector<Arc> arcs_;
};

}  // namespace cyclecover::detail
