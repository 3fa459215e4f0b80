#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclecover/sweep.hpp"
#include "oracles.hpp"

using namespace cyclecover;

namespace {

Instance axis_points(double delta) {
  return Instance(Point{0, 0},
                  {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}},
                  delta);
}

}  // namespace

TEST_CASE("sweep packs the axis square into one cycle when delta allows") {
  auto cover = sweep_solve(axis_points(7.0));
  REQUIRE(cover.cycles.size() == 1);
  CHECK(cover.cycles[0] == std::vector<int>{1, 2, 3, 4});
  double expected = 2.0 + 3.0 * std::sqrt(2.0);
  CHECK(cycle_delay(axis_points(7.0), cover.cycles[0]) ==
        doctest::Approx(expected));
  CHECK(cover.cost == doctest::Approx(expected));
}

TEST_CASE("sweep degenerates to out-and-back cycles at tight delta") {
  auto inst = axis_points(2.0);
  auto cover = sweep_solve(inst);
  REQUIRE(cover.cycles.size() == 4);
  for (const auto& c : cover.cycles) {
    CHECK(c.size() == 1);
    CHECK(cycle_delay(inst, c) == doctest::Approx(2.0));
  }
  CHECK(cover.cost == doctest::Approx(4.0));
}

TEST_CASE("sweep on an empty instance") {
  Instance inst(Point{0, 0}, {}, 1.0);
  auto cover = sweep_solve(inst);
  CHECK(cover.cycles.empty());
  CHECK(cover.cost == 0.0);
}

TEST_CASE("sweep reports the uncoverable point") {
  Instance inst(Point{0, 0}, {Point{0.1, 0}, Point{3, 0}}, 2.0);
  CHECK_THROWS_AS(sweep_solve(inst), infeasible_error);
  try {
    sweep_solve(inst);
  } catch (const infeasible_error& e) {
    CHECK(e.point() == 2);
  }
}

TEST_CASE("points on the root are covered by a free degenerate cycle") {
  Instance inst(Point{2, 2}, {Point{2, 2}, Point{3, 2}}, 2.0);
  auto cover = sweep_solve(inst);
  CHECK(verify_cover(inst, cover).feasible);
  bool found_free = false;
  for (const auto& c : cover.cycles)
    if (c == std::vector<int>{1}) found_free = true;
  CHECK(found_free);
  CHECK(cover.cost == doctest::Approx(1.0));
}

TEST_CASE("build_candidates reuses the paid root arc for free") {
  Instance inst(Point{0, 0}, {Point{1, 0}, Point{1.1, 0.1}}, 100.0);
  EdgeSet paid;
  detail::add_cycle_edges(paid, {1});
  auto cands = build_candidates(inst, {1}, {2}, inst.delta(), paid);
  REQUIRE(cands.size() == 1);
  CHECK(cands[0].w == 1);
  CHECK(cands[0].reused_prefix == std::vector<int>{1});
  CHECK(cands[0].new_points == std::vector<int>{2});
  CHECK(cands[0].added_cost ==
        doctest::Approx(inst.cost(1, 2) + inst.cost(2, 0)));
}

TEST_CASE("build_candidates returns nothing when no new point fits") {
  Instance inst(Point{0, 0}, {Point{1, 0}, Point{-40, 0}}, 2.2);
  EdgeSet paid;
  detail::add_cycle_edges(paid, {1});
  CHECK(build_candidates(inst, {1}, {2}, inst.delta(), paid).empty());
}

TEST_CASE("candidate delays re-check against an independent sum") {
  SplitMix64 rng(91);
  for (int trial = 0; trial < 40; ++trial) {
    double delta = 2.5 + 3.0 * rng.next_unit();
    Instance inst = oracles::random_instance(rng, 8, delta);
    auto order = polar_order(inst);
    std::vector<int> prev(order.begin(), order.begin() + 3);
    std::vector<int> remaining(order.begin() + 3, order.end());
    EdgeSet paid;
    detail::add_cycle_edges(paid, prev);
    for (const auto& cand : build_candidates(inst, prev, remaining, delta,
                                             paid)) {
      std::vector<int> cycle = cand.reused_prefix;
      cycle.insert(cycle.end(), cand.new_points.begin(),
                   cand.new_points.end());
      CHECK(cycle_delay(inst, cycle) == doctest::Approx(cand.delay));
      CHECK(cand.delay <= delta + 1e-9);
      CHECK(cand.new_count >= 1);
      CHECK(cand.added_cost >= 0.0);
    }
  }
}

TEST_CASE("select_candidate ratio and tie-breaks") {
  std::vector<Candidate> two{{{}, {}, 10.0, 2, 0.0, 1},
                             {{}, {}, 6.0, 1, 0.0, 2}};
  CHECK(select_candidate(two).added_cost == 10.0);  // ratios 5 vs 6

  std::vector<Candidate> tied{{{}, {}, 4.0, 2, 0.0, 2},
                              {{}, {}, 2.0, 1, 0.0, 1}};
  CHECK(select_candidate(tied).added_cost == 4.0);  // tie: more new points

  std::vector<Candidate> same_count{{{}, {}, 2.0, 1, 0.0, 3},
                                    {{}, {}, 2.0, 1, 0.0, 2}};
  CHECK(select_candidate(same_count).w == 2);  // tie: earlier reuse endpoint

  std::vector<Candidate> single{{{}, {}, 3.0, 1, 0.0, 1}};
  CHECK(select_candidate(single).added_cost == 3.0);

  CHECK_THROWS_AS(select_candidate({}), std::invalid_argument);
}

TEST_CASE("sweep output is always a feasible cover of all points") {
  SplitMix64 rng(92);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(9));
    Instance inst = oracles::random_instance(rng, n, 1.0);
    // delta at least the out-and-back requirement so sweep cannot throw
    double max_r = 0.0;
    for (int p = 1; p <= n; ++p) max_r = std::max(max_r, inst.cost(0, p));
    double delta = 2.0 * max_r * (1.0 + rng.next_unit());
    inst = inst.with_delta(delta);

    auto cover = sweep_solve(inst);
    CHECK(verify_cover(inst, cover).feasible);

    std::vector<int> covered;
    for (const auto& c : cover.cycles) {
      CHECK(cycle_delay(inst, c) <= delta + 1e-9);
      for (int v : c) covered.push_back(v);
    }
    std::sort(covered.begin(), covered.end());
    covered.erase(std::unique(covered.begin(), covered.end()), covered.end());
    CHECK(static_cast<int>(covered.size()) == n);
  }
}

TEST_CASE("sweep is deterministic") {
  SplitMix64 rng(93);
  Instance inst = oracles::random_instance(rng, 15, 4.5);
  auto a = sweep_solve(inst);
  auto b = sweep_solve(inst);
  CHECK(a.cycles == b.cycles);
  CHECK(a.cost == b.cost);
}

TEST_CASE("alternative cost/benefit denominator stays feasible") {
  SplitMix64 rng(94);
  SweepOptions alt;
  alt.ratio = SweepOptions::Ratio::per_cycle_size;
  for (int trial = 0; trial < 30; ++trial) {
    Instance inst = oracles::random_instance(rng, 8, 6.0);
    auto cover = sweep_solve(inst, alt);
    CHECK(verify_cover(inst, cover).feasible);
  }
}
