#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cyclecover/instance.hpp"
#include "oracles.hpp"

using namespace cyclecover;

TEST_CASE("distance basics") {
  Instance inst(Point{0, 0}, {Point{3, 4}, Point{1, 1}}, 10.0);
  CHECK(inst.cost(0, 1) == doctest::Approx(5.0));
  CHECK(inst.cost(1, 1) == 0.0);
  CHECK(inst.cost(0, 2) == inst.cost(2, 0));
  CHECK_THROWS_AS(inst.cost(0, 3), std::out_of_range);

  // translated 3-4-5 triangle
  Instance shifted(Point{0, 0}, {Point{1, 1}, Point{4, 5}}, 10.0);
  CHECK(shifted.cost(1, 2) == doctest::Approx(5.0));
}

TEST_CASE("distance satisfies the triangle inequality") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Instance inst = oracles::random_instance(rng, 6, 5.0);
    for (int a = 0; a < inst.node_count(); ++a)
      for (int b = 0; b < inst.node_count(); ++b)
        for (int c = 0; c < inst.node_count(); ++c)
          CHECK(inst.cost(a, c) <= inst.cost(a, b) + inst.cost(b, c) + 1e-12);
  }
}

TEST_CASE("instance rejects non-finite points and bad parameters") {
  CHECK_THROWS_AS(Instance(Point{0, 0},
                           {Point{std::numeric_limits<double>::quiet_NaN(), 0}},
                           1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance(Point{0, 0}, {Point{1, 0}}, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance(Point{0, 0}, {Point{1, 0}}, 1.0, -1),
                  std::invalid_argument);
  CHECK_THROWS_AS(Instance(Point{0, 0}, {Point{1, 0}}, 1.0, 1, {2}),
                  std::invalid_argument);
}

TEST_CASE("load_points planar") {
  std::string csv =
      "id,x,y\n"
      "# comment line\n"
      "cc,0,0\n"
      "s1,1,0\n"
      "s2,0,1\n";
  auto res = load_points(csv, Projection::planar, 4.0);
  CHECK(res.instance.n() == 2);
  CHECK(res.instance.point(0).x == 0.0);
  CHECK(res.instance.cost(0, 1) == doctest::Approx(1.0));
  CHECK(res.warnings.empty());

  // root away from the origin: everything is translated
  std::string csv2 =
      "id,x,y\n"
      "cc,5,5\n"
      "a,6,5\n"
      "b,5,6\n";
  auto res2 = load_points(csv2, Projection::planar, 4.0);
  CHECK(res2.instance.point(1).x == doctest::Approx(1.0));
  CHECK(res2.instance.point(1).y == doctest::Approx(0.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(res2.instance.cost(i, j) ==
            doctest::Approx(res.instance.cost(i, j)));
}

TEST_CASE("load_points equirectangular") {
  std::string csv =
      "id,lat,lon\n"
      "cc,33.45,-112.07\n"
      "s1,33.45,-112.06\n";
  auto res = load_points(csv, Projection::equirectangular_km, 100.0);
  // hand-evaluated: 6371 * cos(33.45 deg) * (0.01 deg in rad)
  double expected =
      6371.0 * std::cos(33.45 * std::numbers::pi / 180.0) *
      (0.01 * std::numbers::pi / 180.0);
  CHECK(res.instance.point(1).x == doctest::Approx(expected));
  CHECK(res.instance.point(1).x == doctest::Approx(0.927).epsilon(1e-3));
  CHECK(res.instance.point(1).y == doctest::Approx(0.0));
  CHECK(sniff_projection(csv) == Projection::equirectangular_km);
  CHECK(sniff_projection("id,x,y\ncc,0,0\na,1,1\n") == Projection::planar);
}

TEST_CASE("load_points errors and warnings") {
  CHECK_THROWS(load_points("id,x,y\ncc,0,0\n", Projection::planar, 1.0));
  CHECK_THROWS(load_points("id,x,y\ncc,0,0\na,1\n", Projection::planar, 1.0));
  CHECK_THROWS(load_points("id,x,y\ncc,0,0\na,one,2\n", Projection::planar, 1.0));
  CHECK_THROWS(load_points("x,y\n0,0\n1,1\n", Projection::planar, 1.0));

  auto res = load_points("id,x,y\ncc,0,0\na,1,0\nb,1,0\n", Projection::planar,
                         1.0);
  CHECK(res.warnings.size() == 1);
}

TEST_CASE("sample_pmu determinism and sizes") {
  SplitMix64 rng(3);
  Instance inst = oracles::random_instance(rng, 12, 3.0);

  auto all = sample_pmu(inst, 1.0, 999);
  CHECK(all.pmu().size() == 12);
  for (int i = 0; i < 12; ++i) CHECK(all.pmu()[i] == i + 1);

  auto a = sample_pmu(inst, 0.4, 42);
  auto b = sample_pmu(inst, 0.4, 42);
  CHECK(a.pmu() == b.pmu());
  CHECK(a.pmu().size() == 5);  // ceil(4.8)

  auto c = sample_pmu(inst, 0.4, 43);
  CHECK(c.pmu().size() == 5);

  // ceil at the awkward 35% of 132 boundary
  std::vector<Point> many;
  SplitMix64 rng2(4);
  for (int i = 0; i < 132; ++i)
    many.push_back(Point{rng2.next_unit() + 0.01, rng2.next_unit()});
  Instance big(Point{0, 0}, many, 10.0);
  CHECK(sample_pmu(big, 0.35, 7).pmu().size() == 47);
  CHECK(sample_pmu(big, 0.2, 7).pmu().size() == 27);  // ceil(26.4)
}

TEST_CASE("restrict_to_pmu renumbers the sampled subset") {
  SplitMix64 rng(5);
  Instance inst = oracles::random_instance(rng, 9, 3.0);
  auto sampled = sample_pmu(inst, 0.5, 17);
  auto sub = restrict_to_pmu(sampled);
  CHECK(sub.n() == static_cast<int>(sampled.pmu().size()));
  CHECK(sub.pmu().size() == static_cast<std::size_t>(sub.n()));
  for (std::size_t k = 0; k < sampled.pmu().size(); ++k) {
    int orig = sampled.pmu()[k];
    CHECK(sub.cost(0, static_cast<int>(k) + 1) ==
          doctest::Approx(inst.cost(0, orig)));
  }
}

TEST_CASE("polar_order axis points") {
  Instance inst(Point{0, 0},
                {Point{1, 0}, Point{0, 1}, Point{-1, 0}, Point{0, -1}}, 10.0);
  CHECK(polar_order(inst) == std::vector<int>{1, 2, 3, 4});
}

TEST_CASE("polar_order tie-break by radius") {
  Instance inst(Point{0, 0}, {Point{2, 0}, Point{1, 0}}, 10.0);
  CHECK(polar_order(inst) == std::vector<int>{2, 1});
}

TEST_CASE("polar_order is a permutation with non-decreasing angles") {
  SplitMix64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = oracles::random_instance(rng, 20, 5.0);
    auto order = polar_order(inst);
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 20; ++i) CHECK(sorted[i] == i + 1);
    for (std::size_t i = 0; i + 1 < order.size(); ++i)
      CHECK(polar_angle(inst, order[i]) <=
            polar_angle(inst, order[i + 1]) + 1e-15);
  }
}
