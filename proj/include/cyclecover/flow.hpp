#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclecover/instance.hpp"
#include "cyclecover/mincostflow.hpp"

namespace cyclecover {

class insufficient_connectivity_error : public std::runtime_error {
 public:
  explicit insufficient_connectivity_error(int source, int wanted, int got)
      : std::runtime_error("source " + std::to_string(source) + ": only " +
                           std::to_string(got) + " of " +
                           std::to_string(wanted) +
                           " arc-disjoint paths exist") {}
};

/// `count` pairwise arc-disjoint directed source->root paths of minimum
/// total cost, by successive shortest paths with potentials on the complete
/// digraph (unit arc capacities). Paths are recovered from the flow with
/// lowest-index tie-breaking, so the output is reproducible.
template <CostGraph G>
std::vector<std::vector<int>> min_cost_disjoint_paths(const G& g, int source,
                                                      int count) {
  const int n = g.node_count();
  if (source <= 0 || source >= n)
    throw std::invalid_argument("min_cost_disjoint_paths: bad source");
  if (count < 1)
    throw std::invalid_argument("min_cost_disjoint_paths: count >= 1");

  detail::MinCostFlow flow(n);
  std::vector<std::vector<int>> arc_id(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) arc_id[i][j] = flow.add_arc(i, j, 1, g.cost(i, j));

  auto res = flow.solve(source, 0, count);
  if (res.flow < count)
    throw insufficient_connectivity_error(source, count, res.flow);

  // Remaining per-arc flow units; each path walk consumes the lowest-index
  // available successor.
  std::vector<std::vector<int>> remaining(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && flow.flow(arc_id[i][j]) > 0) remaining[i].push_back(j);
  for (auto& succ : remaining) std::sort(succ.begin(), succ.end());

  std::vector<std::vector<int>> paths;
  for (int p = 0; p < count; ++p) {
    std::vector<int> walk{source};
    while (walk.back() != 0) {
      auto& succ = remaining[walk.back()];
      if (succ.empty())
        throw std::logic_error("min_cost_disjoint_paths: broken decomposition");
      walk.push_back(succ.front());
      succ.erase(succ.begin());
    }
    // Strip any zero-cost loops the decomposition may have picked up.
    std::vector<int> path;
    for (int v : walk) {
      auto it = std::find(path.begin(), path.end(), v);
      if (it != path.end()) path.erase(it + 1, path.end());
      else path.push_back(v);
    }
    paths.push_back(std::move(path));
  }
  return paths;
}

/// Solution of the multiplicity-counting variation: R + 1 arc-disjoint paths
/// per PMU source, solved independently per source (the disjointness
/// constraint never couples distinct sources).
struct FlowSolution {
  std::vector<std::vector<std::vector<int>>> paths;  // [source k][replica r]
  std::map<std::pair<int, int>, int> arc_flow;       // directed arc -> uses
  double objective8 = 0.0;   // every arc use charged
  EdgeSet induced_x;         // links carrying any flow
  double objective10 = 0.0;  // induced links charged once
};

template <CostGraph G>
FlowSolution solve_variation(const G& g, int redundancy) {
  if (g.pmu().empty())
    throw std::invalid_argument("solve_variation: empty pmu");
  if (redundancy < 0)
    throw std::invalid_argument("solve_variation: negative R");

  FlowSolution sol;
  for (int u : g.pmu()) {
    auto paths = min_cost_disjoint_paths(g, u, redundancy + 1);
    for (const auto& path : paths)
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        sol.objective8 += g.cost(path[i], path[i + 1]);
        ++sol.arc_flow[{path[i], path[i + 1]}];
        sol.induced_x.add(path[i], path[i + 1]);
      }
    sol.paths.push_back(std::move(paths));
  }
  for (const auto& [i, j] : sol.induced_x) sol.objective10 += g.cost(i, j);
  return sol;
}

}  // namespace cyclecover
