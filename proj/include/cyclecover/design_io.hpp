#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "cyclecover/cover.hpp"
#include "cyclecover/flow.hpp"

namespace cyclecover {

/// Design wire format: { "cycles": [[1,2,3],[4,5]], "edges": [[0,1],...],
/// "cost": <number> }. A bare array of index pairs is accepted as an
/// edge-only design.
struct Design {
  std::vector<std::vector<int>> cycles;
  EdgeSet edges;
  std::optional<double> cost;
};

inline nlohmann::json design_to_json(const CycleCover& cover) {
  nlohmann::json j;
  j["cycles"] = cover.cycles;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : cover.union_edges)
    edges.push_back(nlohmann::json::array({a, b}));
  j["cost"] = cover.cost;
  return j;
}

inline Design design_from_json(const nlohmann::json& j) {
  Design d;
  auto read_edges = [&](const nlohmann::json& list) {
    for (const auto& e : list) {
      if (!e.is_array() || e.size() != 2)
        throw std::runtime_error("design: edge entries must be index pairs");
      d.edges.add(e[0].get<int>(), e[1].get<int>());
    }
  };
  if (j.is_array()) {
    read_edges(j);
    return d;
  }
  if (!j.is_object()) throw std::runtime_error("design: expected object or array");
  if (j.contains("cycles"))
    d.cycles = j["cycles"].get<std::vector<std::vector<int>>>();
  if (j.contains("edges")) read_edges(j["edges"]);
  if (j.contains("cost")) d.cost = j["cost"].get<double>();
  if (d.edges.empty())
    for (const auto& c : d.cycles) detail::add_cycle_edges(d.edges, c);
  if (d.edges.empty() && d.cycles.empty())
    throw std::runtime_error("design: neither cycles nor edges present");
  return d;
}

inline Design design_from_text(const std::string& text) {
  return design_from_json(nlohmann::json::parse(text));
}

inline nlohmann::json flow_solution_to_json(const FlowSolution& sol) {
  nlohmann::json j;
  j["paths"] = sol.paths;
  j["objective8"] = sol.objective8;
  j["objective10"] = sol.objective10;
  auto& edges = j["edges"] = nlohmann::json::array();
  for (const auto& [a, b] : sol.induced_x)
    edges.push_back(nlohmann::json::array({a, b}));
  return j;
}

}  // namespace cyclecover
