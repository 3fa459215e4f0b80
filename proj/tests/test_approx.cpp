#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cyclecover/approx.hpp"
#include "cyclecover/exact.hpp"
#include "oracles.hpp"

using namespace cyclecover;

namespace {

// Prim with a plain matrix scan, as an independent MST reference.
template <CostGraph G>
double prim_weight(const G& g) {
  const int n = g.node_count();
  std::vector<bool> in_tree(n, false);
  std::vector<double> key(n, oracles::kInf);
  key[0] = 0.0;
  double total = 0.0;
  for (int round = 0; round < n; ++round) {
    int best = -1;
    for (int v = 0; v < n; ++v)
      if (!in_tree[v] && (best == -1 || key[v] < key[best])) best = v;
    in_tree[best] = true;
    total += key[best];
    for (int v = 0; v < n; ++v)
      if (!in_tree[v]) key[v] = std::min(key[v], g.cost(best, v));
  }
  return total;
}

bool is_tour(const Tour& tour, int node_count) {
  if (static_cast<int>(tour.order.size()) != node_count) return false;
  std::vector<bool> seen(node_count, false);
  for (int v : tour.order) {
    if (v < 0 || v >= node_count || seen[v]) return false;
    seen[v] = true;
  }
  return tour.order.front() == 0;
}

}  // namespace

TEST_CASE("mst on stars and lines") {
  Instance star(Point{0, 0},
                {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}}, 10.0);
  CHECK(mst(star).weight == doctest::Approx(4.0));

  Instance line(Point{0, 0}, {Point{1, 0}, Point{2, 0}, Point{3, 0}}, 10.0);
  CHECK(mst(line).weight == doctest::Approx(3.0));
}

TEST_CASE("kruskal agrees with prim on random instances") {
  SplitMix64 rng(201);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.bounded(10));
    Instance inst = oracles::random_instance(rng, n, 10.0);
    auto tree = mst(inst);
    CHECK(tree.weight == doctest::Approx(prim_weight(inst)));
    CHECK(tree.edges.size() == static_cast<std::size_t>(inst.node_count() - 1));
  }
}

TEST_CASE("matching on tiny sets") {
  auto dist = [](int a, int b) { return std::abs(a - b) * 1.0; };

  auto two = min_weight_perfect_matching({3, 7}, dist);
  CHECK(two.pairs.size() == 1);
  CHECK(two.weight == doctest::Approx(4.0));

  // 0, 1, 10, 11 on a line: near pairs win
  auto four = min_weight_perfect_matching({0, 1, 10, 11}, dist);
  CHECK(four.weight == doctest::Approx(2.0));
  CHECK(four.exact);

  CHECK_THROWS_AS(min_weight_perfect_matching({1, 2, 3}, dist),
                  std::invalid_argument);
}

TEST_CASE("matching equals the 945-pairing brute force") {
  SplitMix64 rng(202);
  for (int trial = 0; trial < 15; ++trial) {
    std::vector<std::vector<double>> w(10, std::vector<double>(10, 0.0));
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) w[i][j] = w[j][i] = rng.next_unit();
    std::vector<int> nodes{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    auto got = min_weight_perfect_matching(
        nodes, [&](int a, int b) { return w[a][b]; });
    CHECK(got.weight == doctest::Approx(oracles::brute_matching(nodes, w)));
  }
}

TEST_CASE("greedy fallback beyond the exact matching cap") {
  SplitMix64 rng(203);
  std::vector<int> nodes(20);
  std::vector<std::vector<double>> w(20, std::vector<double>(20, 0.0));
  for (int i = 0; i < 20; ++i) nodes[i] = i;
  for (int i = 0; i < 20; ++i)
    for (int j = i + 1; j < 20; ++j) w[i][j] = w[j][i] = rng.next_unit();
  auto got =
      min_weight_perfect_matching(nodes, [&](int a, int b) { return w[a][b]; });
  CHECK_FALSE(got.exact);
  CHECK(got.pairs.size() == 10);
}

TEST_CASE("christofides and double tree basics") {
  Instance tri(Point{0, 0}, {Point{1, 0}, Point{0.5, std::sqrt(3) / 2}}, 10.0);
  CHECK(double_tree_tour(tri).length == doctest::Approx(3.0));
  CHECK(christofides_tour(tri).length == doctest::Approx(3.0));

  Instance tiny(Point{0, 0}, {Point{1, 0}}, 10.0);
  CHECK_THROWS_AS(christofides_tour(tiny), std::invalid_argument);
  CHECK_THROWS_AS(double_tree_tour(tiny), std::invalid_argument);
}

TEST_CASE("tour guarantees on random instances") {
  SplitMix64 rng(204);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(rng.bounded(9));  // up to 10 points
    Instance inst = oracles::random_instance(rng, n, 100.0);
    auto tree = mst(inst);
    auto hk = held_karp_tsp(inst);
    auto chris = christofides_tour(inst);
    auto dt = double_tree_tour(inst);

    CHECK(is_tour(chris, inst.node_count()));
    CHECK(is_tour(dt, inst.node_count()));

    // both are honest tours, so never below the optimum
    CHECK(chris.length >= hk.length - 1e-9);
    CHECK(dt.length >= hk.length - 1e-9);

    // the classical guarantees
    CHECK(chris.matching_exact);
    CHECK(chris.length <= 1.5 * hk.length + 1e-9);
    CHECK(dt.length <= 2.0 * tree.weight + 1e-9);

    // a tour is one Euler walk of tree + matching edges, shortcut
    CHECK(chris.length <= tree.weight + 2.0 * tree.weight + 1e-9);
  }
}

TEST_CASE("mst strictly undercuts the proper-cycle optimum") {
  SplitMix64 rng(205);
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.bounded(3));
    Instance inst = oracles::random_instance(rng, n, 3.0 + 3.0 * rng.next_unit());
    auto strict = exact_rdcmccc(inst, VerifyMode::cycle_delta_strict);
    if (!strict.feasible) continue;
    CHECK(mst(inst).weight < strict.cost - 1e-12);
    // the out-and-back reading can only be cheaper, but never below spanning
    auto lax = exact_rdcmccc(inst);
    CHECK(lax.cost >= mst(inst).weight - 1e-9);
    ++checked;
  }
  CHECK(checked > 10);
}

TEST_CASE("christofides on the benchmark layout sits between OPT and 1.5 MST") {
  Instance inst = observation1_instance();
  auto chris = christofides_tour(inst);
  CHECK(chris.matching_exact);
  CHECK(chris.length >= 8.315 - 1e-6);
  CHECK(chris.length <= 1.5 * mst(inst).weight + 1e-9);
}

TEST_CASE("tours become designs only when they fit delta") {
  Instance inst(Point{0, 0}, {Point{1, 0}, Point{1, 1}, Point{0, 1}}, 4.0);
  auto tour = christofides_tour(inst);
  auto design = tour_as_design(inst, tour);
  REQUIRE(design.has_value());
  CHECK(verify_cover(inst, *design).feasible);

  auto tight = tour_as_design(inst.with_delta(tour.length - 0.5), tour);
  CHECK_FALSE(tight.has_value());
}
