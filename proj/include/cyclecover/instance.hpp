#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cyclecover/prng.hpp"

namespace cyclecover {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point& a, const Point& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Anything the delay/cost based solvers can run on: a complete graph with a
/// root at index 0, symmetric per-edge cost and delay, a PMU subset and a
/// delay threshold. Instance (geometric) and the Hamiltonian-cycle reduction
/// graph both model this.
template <typename G>
concept CostGraph = requires(const G& g, int i, int j) {
  { g.node_count() } -> std::convertible_to<int>;
  { g.cost(i, j) } -> std::convertible_to<double>;
  { g.delay(i, j) } -> std::convertible_to<double>;
  { g.pmu() } -> std::convertible_to<const std::vector<int>&>;
  { g.delta() } -> std::convertible_to<double>;
};

/// Set of undirected edges {i, j} over node indices 0..n (0 is the root).
/// Self loops are rejected; pairs are stored normalized with i < j.
class EdgeSet {
 public:
  EdgeSet() = default;

  void add(int i, int j) {
    if (i == j) throw std::invalid_argument("EdgeSet: self loop");
    if (i < 0 || j < 0) throw std::invalid_argument("EdgeSet: negative index");
    edges_.insert(normalized(i, j));
  }

  bool contains(int i, int j) const {
    return edges_.count(normalized(i, j)) > 0;
  }

  void remove(int i, int j) { edges_.erase(normalized(i, j)); }

  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }

  auto begin() const { return edges_.begin(); }
  auto end() const { return edges_.end(); }

  int max_index() const {
    int m = -1;
    for (const auto& [i, j] : edges_) m = std::max(m, j);
    return m;
  }

  bool operator==(const EdgeSet& other) const = default;

 private:
  static std::pair<int, int> normalized(int i, int j) {
    return {std::min(i, j), std::max(i, j)};
  }

  std::set<std::pair<int, int>> edges_;
};

/// A problem instance: the control center (root, node 0, always at the
/// origin), n substation points (nodes 1..n), the PMU subset, the delay
/// threshold delta and the redundancy level R. Cost and delay of a link both
/// equal the Euclidean distance between its endpoints; the full matrix is
/// precomputed at construction. Instances are immutable afterwards and safe
/// to share across threads.
class Instance {
 public:
  Instance(Point root, std::vector<Point> points, double delta,
           int redundancy = 1, std::vector<int> pmu = {}) {
    if (!(delta > 0.0)) throw std::invalid_argument("Instance: delta must be > 0");
    if (redundancy < 0) throw std::invalid_argument("Instance: R must be >= 0");
    check_finite(root);
    for (const Point& p : points) check_finite(p);

    // The root is translated to the origin; all geometry is relative to it.
    nodes_.reserve(points.size() + 1);
    nodes_.push_back(Point{0.0, 0.0});
    for (const Point& p : points)
      nodes_.push_back(Point{p.x - root.x, p.y - root.y});

    delta_ = delta;
    redundancy_ = redundancy;

    const int total = static_cast<int>(nodes_.size());
    if (pmu.empty()) {
      for (int i = 1; i < total; ++i) pmu.push_back(i);
    } else {
      std::sort(pmu.begin(), pmu.end());
      if (std::adjacent_find(pmu.begin(), pmu.end()) != pmu.end())
        throw std::invalid_argument("Instance: duplicate pmu index");
      if (pmu.front() < 1 || pmu.back() >= total)
        throw std::invalid_argument("Instance: pmu index out of range");
    }
    pmu_ = std::move(pmu);

    matrix_.assign(static_cast<std::size_t>(total) * total, 0.0);
    for (int i = 0; i < total; ++i)
      for (int j = i + 1; j < total; ++j) {
        double d = distance(nodes_[i], nodes_[j]);
        matrix_[index(i, j)] = d;
        matrix_[index(j, i)] = d;
      }
  }

  int n() const { return static_cast<int>(nodes_.size()) - 1; }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  const Point& point(int i) const {
    check_index(i);
    return nodes_[i];
  }

  double cost(int i, int j) const {
    check_index(i);
    check_index(j);
    return matrix_[index(i, j)];
  }

  double delay(int i, int j) const { return cost(i, j); }

  const std::vector<int>& pmu() const { return pmu_; }
  double delta() const { return delta_; }
  int redundancy() const { return redundancy_; }

  Instance with_pmu(std::vector<int> pmu) const {
    Instance copy(*this);
    std::sort(pmu.begin(), pmu.end());
    if (pmu.empty() || pmu.front() < 1 || pmu.back() > n() ||
        std::adjacent_find(pmu.begin(), pmu.end()) != pmu.end())
      throw std::invalid_argument("with_pmu: bad subset");
    copy.pmu_ = std::move(pmu);
    return copy;
  }

  Instance with_delta(double delta) const {
    Instance copy(*this);
    if (!(delta > 0.0)) throw std::invalid_argument("with_delta: delta must be > 0");
    copy.delta_ = delta;
    return copy;
  }

 private:
  void check_index(int i) const {
    if (i < 0 || i >= static_cast<int>(nodes_.size()))
      throw std::out_of_range("Instance: node index out of range");
  }

  static void check_finite(const Point& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::invalid_argument("Instance: non-finite coordinate");
  }

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * nodes_.size() + j;
  }

  std::vector<Point> nodes_;
  std::vector<int> pmu_;
  std::vector<double> matrix_;
  double delta_ = 1.0;
  int redundancy_ = 1;
};

static_assert(CostGraph<Instance>);

/// Euclidean distance between two nodes of an instance.
inline double distance(const Instance& inst, int i, int j) {
  return inst.cost(i, j);
}

enum class Projection {
  planar,             // coordinates used verbatim, translated to the root
  equirectangular_km  // (lat, lon) degrees -> kilometres around the root
};

struct LoadResult {
  Instance instance;
  std::vector<std::string> warnings;
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    std::size_t a = field.find_first_not_of(" \t\r");
    std::size_t b = field.find_last_not_of(" \t\r");
    fields.push_back(a == std::string::npos ? "" : field.substr(a, b - a + 1));
  }
  return fields;
}

inline double parse_number(const std::string& s, int line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("load_points: bad number at line " +
                             std::to_string(line_no));
  }
  if (pos != s.size() || !std::isfinite(v))
    throw std::runtime_error("load_points: bad number at line " +
                             std::to_string(line_no));
  return v;
}

}  // namespace detail

/// Parse a substation CSV. Header is `id,x,y` (planar) or `id,lat,lon`
/// (geographic); `#`-prefixed lines are ignored; the first data row is the
/// control center and defines node 0, subsequent rows get indices 1..n in
/// file order. The equirectangular projection maps a row (lat, lon) to
/// x = R_earth * cos(lat_root) * (lon - lon_root), y = R_earth * (lat -
/// lat_root) in kilometres, with R_earth = 6371 km and angles in degrees.
/// Duplicate coordinates are kept but reported as warnings.
inline LoadResult load_points(const std::string& csv_text, Projection mode,
                              double delta, int redundancy = 1) {
  std::vector<std::pair<double, double>> rows;
  std::string line;
  std::stringstream ss(csv_text);
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(ss, line)) {
    ++line_no;
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    auto fields = detail::split_csv_row(line);
    if (!header_seen) {
      if (fields.size() != 3 || fields[0] != "id")
        throw std::runtime_error("load_points: expected header id,x,y or id,lat,lon");
      header_seen = true;
      continue;
    }
    if (fields.size() != 3)
      throw std::runtime_error("load_points: malformed row at line " +
                               std::to_string(line_no));
    rows.emplace_back(detail::parse_number(fields[1], line_no),
                      detail::parse_number(fields[2], line_no));
  }
  if (rows.size() < 2)
    throw std::runtime_error("load_points: need a root row and at least one point");

  std::vector<Point> pts;
  Point root;
  if (mode == Projection::planar) {
    root = Point{rows[0].first, rows[0].second};
    for (std::size_t i = 1; i < rows.size(); ++i)
      pts.push_back(Point{rows[i].first, rows[i].second});
  } else {
    constexpr double kEarthRadiusKm = 6371.0;
    constexpr double kDegToRad = std::numbers::pi / 180.0;
    const double lat0 = rows[0].first;
    const double lon0 = rows[0].second;
    root = Point{0.0, 0.0};
    for (std::size_t i = 1; i < rows.size(); ++i) {
      double dlat = (rows[i].first - lat0) * kDegToRad;
      double dlon = (rows[i].second - lon0) * kDegToRad;
      pts.push_back(Point{kEarthRadiusKm * std::cos(lat0 * kDegToRad) * dlon,
                          kEarthRadiusKm * dlat});
    }
  }

  LoadResult result{Instance(root, pts, delta, redundancy), {}};
  // Duplicates are legal (co-located facilities) but worth surfacing.
  for (int i = 0; i < result.instance.node_count(); ++i)
    for (int j = i + 1; j < result.instance.node_count(); ++j)
      if (result.instance.cost(i, j) == 0.0)
        result.warnings.push_back("duplicate coordinates: nodes " +
                                  std::to_string(i) + " and " +
                                  std::to_string(j));
  return result;
}

/// Sniff the projection from the CSV header: a `lat` column selects the
/// equirectangular mode, anything else is planar.
inline Projection sniff_projection(const std::string& csv_text) {
  std::stringstream ss(csv_text);
  std::string line;
  while (std::getline(ss, line)) {
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos || line[a] == '#') continue;
    auto fields = detail::split_csv_row(line);
    if (fields.size() == 3 && fields[1] == "lat")
      return Projection::equirectangular_km;
    return Projection::planar;
  }
  return Projection::planar;
}

/// Draw ceil(fraction * n) distinct PMU substations with a seeded
/// Fisher-Yates prefix over the splitmix64 stream. Deterministic for a fixed
/// (instance, fraction, seed).
inline Instance sample_pmu(const Instance& inst, double fraction,
                           std::uint64_t seed) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("sample_pmu: fraction must be in (0, 1]");
  const int n = inst.n();
  // The epsilon guards against 0.2 * 5 = 1.0000000000000002-style roundoff.
  int k = static_cast<int>(std::ceil(fraction * n - 1e-9));
  k = std::clamp(k, 1, n);

  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i + 1;
  SplitMix64 rng(seed);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n - i)));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return inst.with_pmu(std::move(ids));
}

/// Sub-instance containing only the PMU substations (renumbered 1..s in
/// ascending original order), with every remaining point a PMU. Used by the
/// benchmark so SWEEP and the exact solver run on the sampled subset.
inline Instance restrict_to_pmu(const Instance& inst) {
  std::vector<Point> pts;
  for (int u : inst.pmu()) pts.push_back(inst.point(u));
  return Instance(Point{0.0, 0.0}, pts, inst.delta(), inst.redundancy());
}

/// Polar angle of node i about the root, normalized to [0, 2pi). Points
/// coincident with the root get angle 0.
inline double polar_angle(const Instance& inst, int i) {
  const Point& p = inst.point(i);
  if (p.x == 0.0 && p.y == 0.0) return 0.0;
  double a = std::atan2(p.y, p.x);
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

/// Substation indices 1..n sorted by polar angle about the root, ties broken
/// by radius ascending, then by index.
inline std::vector<int> polar_order(const Instance& inst) {
  std::vector<int> order(inst.n());
  for (int i = 0; i < inst.n(); ++i) order[i] = i + 1;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double aa = polar_angle(inst, a);
    double ab = polar_angle(inst, b);
    if (aa != ab) return aa < ab;
    double ra = inst.cost(0, a);
    double rb = inst.cost(0, b);
    if (ra != rb) return ra < rb;
    return a < b;
  });
  return order;
}

}  // namespace cyclecover
