#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclecover/cover.hpp"
#include "cyclecover/instance.hpp"

namespace cyclecover {

/// Thrown when some point cannot be covered at all: even the out-and-back
/// cycle through it alone exceeds delta.
class infeasible_error : public std::runtime_error {
 public:
  explicit infeasible_error(int point)
      : std::runtime_error("point " + std::to_string(point) +
                           " cannot be covered within delta"),
        point_(point) {}
  int point() const { return point_; }

 private:
  int point_;
};

/// One possible next cycle: a root-anchored arc reused from the previous
/// cycle (its links already paid for) followed by a run of new points in
/// sweep order. Reuse is free in cost, never in delay.
struct Candidate {
  std::vector<int> reused_prefix;  // previous-cycle arc, starting at the root
  std::vector<int> new_points;     // appended in sweep order
  double added_cost = 0.0;         // cost of links absent from earlier cycles
  int new_count = 0;
  double delay = 0.0;              // full closed-cycle delay
  int w = 0;                       // 1-based reuse endpoint within prev cycle
};

struct SweepOptions {
  // Cost/benefit denominator: new points covered (the prose rule) or the
  // whole candidate cycle size (the alternative reading).
  enum class Ratio { per_new_point, per_cycle_size };
  Ratio ratio = Ratio::per_new_point;
};

namespace detail {

inline double candidate_ratio(const Candidate& c, SweepOptions::Ratio rule) {
  int denom = rule == SweepOptions::Ratio::per_new_point
                  ? c.new_count
                  : c.new_count + static_cast<int>(c.reused_prefix.size());
  return c.added_cost / denom;
}

inline double edge_price(const Instance& inst, const EdgeSet& paid, int a,
                         int b) {
  return paid.contains(a, b) ? 0.0 : inst.cost(a, b);
}

// Greedy prefix cycle of Algorithm-1 lines 5-10: starting from `from`, take
// points in sweep order while the closed cycle still fits delta.
inline std::vector<int> greedy_cycle(const Instance& inst,
                                     const std::vector<int>& order,
                                     std::size_t from, double delta) {
  std::vector<int> cycle{order[from]};
  double open_delay = inst.delay(0, order[from]);  // root -> current end
  for (std::size_t i = from + 1; i < order.size(); ++i) {
    int q = order[i];
    double with_q = open_delay + inst.delay(cycle.back(), q) + inst.delay(q, 0);
    if (with_q > delta + 1e-9) break;
    open_delay += inst.delay(cycle.back(), q);
    cycle.push_back(q);
  }
  return cycle;
}

}  // namespace detail

/// Candidates for the next cycle, built from the previous one. For each
/// reuse endpoint w, the cheaper of the two root-anchored arcs of prev_cycle
/// ending at position w is reused, then unvisited points are appended in
/// sweep order while the closed cycle fits delta. Candidates that cover no
/// new point are discarded.
inline std::vector<Candidate> build_candidates(
    const Instance& inst, const std::vector<int>& prev_cycle,
    const std::vector<int>& next_unvisited, double delta,
    const EdgeSet& paid_edges) {
  if (prev_cycle.empty())
    throw std::invalid_argument("build_candidates: empty previous cycle");
  if (next_unvisited.empty())
    throw std::invalid_argument("build_candidates: nothing left to cover");

  const int a = static_cast<int>(prev_cycle.size());
  std::vector<Candidate> result;
  for (int w = 1; w <= a; ++w) {
    // forward arc root -> q^1 -> ... -> q^w
    double forward = inst.delay(0, prev_cycle[0]);
    for (int i = 0; i + 1 < w; ++i)
      forward += inst.delay(prev_cycle[i], prev_cycle[i + 1]);
    // backward arc root -> q^a -> ... -> q^w
    double backward = inst.delay(0, prev_cycle[a - 1]);
    for (int i = a - 1; i > w - 1; --i)
      backward += inst.delay(prev_cycle[i], prev_cycle[i - 1]);

    Candidate cand;
    cand.w = w;
    if (forward <= backward) {
      cand.reused_prefix.assign(prev_cycle.begin(), prev_cycle.begin() + w);
      cand.delay = forward;
    } else {
      cand.reused_prefix.assign(prev_cycle.rbegin(),
                                prev_cycle.rbegin() + (a - w + 1));
      cand.delay = backward;
    }

    int end = cand.reused_prefix.back();
    for (int q : next_unvisited) {
      double closed = cand.delay + inst.delay(end, q) + inst.delay(q, 0);
      if (closed > delta + 1e-9) break;
      cand.added_cost += detail::edge_price(inst, paid_edges, end, q);
      cand.delay += inst.delay(end, q);
      cand.new_points.push_back(q);
      end = q;
    }
    if (cand.new_points.empty()) continue;
    cand.delay += inst.delay(end, 0);  // closing edge
    cand.added_cost += detail::edge_price(inst, paid_edges, end, 0);
    cand.new_count = static_cast<int>(cand.new_points.size());
    result.push_back(std::move(cand));
  }
  return result;
}

/// Pick the best cost/benefit candidate: least added cost per new point,
/// ties broken toward more new points, then the earlier reuse endpoint.
inline const Candidate& select_candidate(
    const std::vector<Candidate>& candidates,
    SweepOptions::Ratio rule = SweepOptions::Ratio::per_new_point) {
  if (candidates.empty())
    throw std::invalid_argument("select_candidate: empty candidate list");
  const Candidate* best = &candidates.front();
  for (const Candidate& c : candidates) {
    double rc = detail::candidate_ratio(c, rule);
    double rb = detail::candidate_ratio(*best, rule);
    if (rc < rb || (rc == rb && (c.new_count > best->new_count ||
                                 (c.new_count == best->new_count &&
                                  c.w < best->w))))
      best = &c;
  }
  return *best;
}

/// The SWEEP heuristic. Points are sorted by polar angle about the root; the
/// first cycle takes the longest angular prefix that fits delta, and each
/// later cycle is chosen from candidates that reuse a paid-for arc of the
/// previous cycle. Every cycle's delay stays within delta; every point ends
/// up in at least one cycle. Throws infeasible_error when a single point
/// cannot fit even on its own.
inline CycleCover sweep_solve(const Instance& inst,
                              const SweepOptions& options = {}) {
  std::vector<std::vector<int>> cycles;
  for (int p = 1; p <= inst.n(); ++p) {
    double out_and_back = 2.0 * inst.delay(0, p);
    if (out_and_back > inst.delta() + 1e-9) throw infeasible_error(p);
    // Points on the root need no sweeping; cover them with a free cycle.
    if (inst.delay(0, p) == 0.0) cycles.push_back({p});
  }

  std::vector<int> order;
  for (int p : polar_order(inst))
    if (inst.delay(0, p) > 0.0) order.push_back(p);

  if (!order.empty()) {
    std::vector<int> first = detail::greedy_cycle(inst, order, 0, inst.delta());
    EdgeSet paid;
    detail::add_cycle_edges(paid, first);
    std::size_t covered = first.size();
    std::vector<int> prev = first;
    cycles.push_back(std::move(first));

    while (covered < order.size()) {
      std::vector<int> remaining(order.begin() + covered, order.end());
      auto candidates =
          build_candidates(inst, prev, remaining, inst.delta(), paid);
      std::vector<int> next_cycle;
      std::size_t newly = 0;
      if (candidates.empty()) {
        next_cycle = detail::greedy_cycle(inst, order, covered, inst.delta());
        newly = next_cycle.size();
      } else {
        const Candidate& best = select_candidate(candidates, options.ratio);
        next_cycle = best.reused_prefix;
        next_cycle.insert(next_cycle.end(), best.new_points.begin(),
                          best.new_points.end());
        newly = best.new_points.size();
      }
      detail::add_cycle_edges(paid, next_cycle);
      covered += newly;
      prev = next_cycle;
      cycles.push_back(std::move(next_cycle));
    }
  }

  return make_cover(inst, std::move(cycles));
}

}  // namespace cyclecover
