#pragma once

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "cyclecover/cover.hpp"
#include "cyclecover/instance.hpp"

namespace cyclecover {

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace detail

/// Render a design over the instance geometry: substations as dots, the
/// control center highlighted, one stroke color per cycle, edges outside any
/// cycle in gray. Exactly one circle element per node.
inline std::string render_design_svg(const Instance& inst,
                                     const std::vector<std::vector<int>>& cycles,
                                     const EdgeSet& extra_edges = {}) {
  constexpr double kSize = 640.0;
  constexpr double kMargin = 40.0;
  static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

  double min_x = 0.0, max_x = 0.0, min_y = 0.0, max_y = 0.0;
  for (int i = 0; i < inst.node_count(); ++i) {
    min_x = std::min(min_x, inst.point(i).x);
    max_x = std::max(max_x, inst.point(i).x);
    min_y = std::min(min_y, inst.point(i).y);
    max_y = std::max(max_y, inst.point(i).y);
  }
  double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  double scale = (kSize - 2 * kMargin) / span;
  auto px = [&](int node) {
    return kMargin + (inst.point(node).x - min_x) * scale;
  };
  auto py = [&](int node) {  // svg y axis points down
    return kSize - kMargin - (inst.point(node).y - min_y) * scale;
  };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         detail::svg_num(kSize) + "\" height=\"" + detail::svg_num(kSize) +
         "\" viewBox=\"0 0 " + detail::svg_num(kSize) + " " +
         detail::svg_num(kSize) + "\">\n";

  auto line = [&](int a, int b, const std::string& color) {
    out += "  <line x1=\"" + detail::svg_num(px(a)) + "\" y1=\"" +
           detail::svg_num(py(a)) + "\" x2=\"" + detail::svg_num(px(b)) +
           "\" y2=\"" + detail::svg_num(py(b)) + "\" stroke=\"" + color +
           "\" stroke-width=\"1.5\"/>\n";
  };

  EdgeSet drawn;
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    const char* color = kPalette[k % (sizeof(kPalette) / sizeof(*kPalette))];
    const auto& c = cycles[k];
    if (c.empty()) continue;
    EdgeSet cycle_edges;
    detail::add_cycle_edges(cycle_edges, c);
    for (const auto& [a, b] : cycle_edges)
      if (!drawn.contains(a, b)) {
        drawn.add(a, b);
        line(a, b, color);
      }
  }
  for (const auto& [a, b] : extra_edges)
    if (!drawn.contains(a, b)) {
      drawn.add(a, b);
      line(a, b, "#999999");
    }

  for (int i = 0; i < inst.node_count(); ++i) {
    bool root = i == 0;
    out += "  <circle cx=\"" + detail::svg_num(px(i)) + "\" cy=\"" +
           detail::svg_num(py(i)) + "\" r=\"" + (root ? "6" : "3.5") +
           "\" fill=\"" + (root ? "#000000" : "#4682b4") + "\"/>\n";
  }
  out += "  <text x=\"" + detail::svg_num(px(0) + 8.0) + "\" y=\"" +
         detail::svg_num(py(0) - 8.0) + "\" font-size=\"14\">CC</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace cyclecover
