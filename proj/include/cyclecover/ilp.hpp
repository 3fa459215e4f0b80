#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclecover/instance.hpp"

namespace cyclecover {

// ---------------------------------------------------------------------------
// Solver-neutral linear model.
// ---------------------------------------------------------------------------

enum class VarKind { binary, continuous, integer };
enum class LpRelation { le, eq, ge };

struct LpVariable {
  std::string name;
  VarKind kind = VarKind::continuous;
  double lb = 0.0;
  double ub = std::numeric_limits<double>::infinity();
};

struct LpTerm {
  int var = 0;
  double coeff = 0.0;
};

struct LpConstraint {
  std::string name;
  std::vector<LpTerm> terms;
  LpRelation rel = LpRelation::le;
  double rhs = 0.0;
};

struct LpModel {
  std::vector<LpVariable> variables;
  std::vector<LpTerm> objective;  // sense: minimize
  std::vector<LpConstraint> constraints;
  struct Meta {
    std::uint64_t instance_hash = 0;
    int redundancy = 0;
    double delta = 0.0;
  } meta;

  int add_variable(std::string name, VarKind kind, double lb = 0.0,
                   double ub = std::numeric_limits<double>::infinity()) {
    variables.push_back({std::move(name), kind, lb, ub});
    return static_cast<int>(variables.size()) - 1;
  }

  LpConstraint& add_constraint(LpRelation rel, double rhs) {
    constraints.push_back(
        {"c" + std::to_string(constraints.size()), {}, rel, rhs});
    return constraints.back();
  }
};

namespace detail {

template <CostGraph G>
std::uint64_t instance_hash(const G& g, int redundancy) {
  // FNV-1a over the cost matrix bit patterns, delta, R and the pmu set.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&](double d) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(d));
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  mix(static_cast<std::uint64_t>(g.node_count()));
  for (int i = 0; i < g.node_count(); ++i)
    for (int j = 0; j < g.node_count(); ++j) mix_double(g.cost(i, j));
  mix_double(g.delta());
  mix(static_cast<std::uint64_t>(redundancy));
  for (int u : g.pmu()) mix(static_cast<std::uint64_t>(u));
  return h;
}

inline std::string arc_var_name(int k, int r, int i, int j) {
  return "f_" + std::to_string(k) + "_" + std::to_string(r) + "_" +
         std::to_string(i) + "_" + std::to_string(j);
}

// Shared index bookkeeping for the flow formulations: one binary variable
// per (pmu source k, replica r, directed arc).
template <CostGraph G>
struct FlowVars {
  int n;                               // highest node index
  int s;                               // number of pmu sources
  int flows;                           // R + 1
  std::vector<std::pair<int, int>> arcs;
  std::vector<int> index;              // [((k*flows)+r)*arcs + a]

  FlowVars(const G& g, int redundancy, LpModel& model)
      : n(g.node_count() - 1),
        s(static_cast<int>(g.pmu().size())),
        flows(redundancy + 1) {
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        if (i != j) arcs.emplace_back(i, j);
    index.resize(static_cast<std::size_t>(s) * flows * arcs.size());
    for (int k = 0; k < s; ++k)
      for (int r = 0; r < flows; ++r)
        for (std::size_t a = 0; a < arcs.size(); ++a)
          index[(static_cast<std::size_t>(k) * flows + r) * arcs.size() + a] =
              model.add_variable(
                  arc_var_name(k + 1, r + 1, arcs[a].first, arcs[a].second),
                  VarKind::binary, 0.0, 1.0);
  }

  int var(int k, int r, std::size_t arc) const {
    return index[(static_cast<std::size_t>(k) * flows + r) * arcs.size() + arc];
  }

  // conservation constraints (4), (5), (6) for every flow
  void add_conservation(const G& g, LpModel& model) const {
    for (int k = 0; k < s; ++k) {
      int source = g.pmu()[k];
      for (int r = 0; r < flows; ++r) {
        for (int node = 0; node <= n; ++node) {
          double rhs = node == 0 ? 1.0 : (node == source ? -1.0 : 0.0);
          auto& c = model.add_constraint(LpRelation::eq, rhs);
          for (std::size_t a = 0; a < arcs.size(); ++a) {
            if (arcs[a].second == node) c.terms.push_back({var(k, r, a), 1.0});
            if (arcs[a].first == node) c.terms.push_back({var(k, r, a), -1.0});
          }
        }
      }
      // disjointness (7): replicas of one source never share a directed arc
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        auto& c = model.add_constraint(LpRelation::le, 1.0);
        for (int r = 0; r < flows; ++r) c.terms.push_back({var(k, r, a), 1.0});
      }
    }
  }
};

}  // namespace detail

struct IlpOptions {
  // The linking constraint bounds MaxTF by multiplier * X. The safe value is
  // s * (R + 1), the largest flow a link can carry; the tighter textbook
  // constant s can cut off integral points when replicas stack on one arc.
  bool classic_maxtf_bound = false;
};

/// Full network-design ILP: flow conservation and disjointness per source
/// replica, per-link MaxTF aggregation, binary installation variables, delay
/// bounds per flow, and the pay-each-link-once objective.
template <CostGraph G>
LpModel build_ilp(const G& g, int redundancy, IlpOptions options = {}) {
  if (g.pmu().empty()) throw std::invalid_argument("build_ilp: empty pmu");
  if (redundancy < 0) throw std::invalid_argument("build_ilp: negative R");

  LpModel model;
  model.meta = {detail::instance_hash(g, redundancy), redundancy, g.delta()};
  detail::FlowVars<G> fv(g, redundancy, model);
  const int n = fv.n;
  const int s = fv.s;
  const double link_cap =
      options.classic_maxtf_bound ? s : s * (redundancy + 1);

  std::vector<std::vector<int>> x_var(n + 1, std::vector<int>(n + 1, -1));
  std::vector<std::vector<int>> mtf_var(n + 1, std::vector<int>(n + 1, -1));
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      x_var[i][j] = model.add_variable(
          "X_" + std::to_string(i) + "_" + std::to_string(j), VarKind::binary,
          0.0, 1.0);
      mtf_var[i][j] = model.add_variable(
          "MTF_" + std::to_string(i) + "_" + std::to_string(j),
          VarKind::continuous, 0.0, s * (redundancy + 1));
    }

  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      model.objective.push_back({x_var[i][j], g.cost(i, j)});

  fv.add_conservation(g, model);

  // MaxTF >= total flow in each direction; total flow written out per (9)
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      for (auto [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
        std::size_t a = 0;
        while (fv.arcs[a] != std::pair{from, to}) ++a;
        auto& c = model.add_constraint(LpRelation::le, 0.0);
        for (int k = 0; k < s; ++k)
          for (int r = 0; r < fv.flows; ++r)
            c.terms.push_back({fv.var(k, r, a), 1.0});
        c.terms.push_back({mtf_var[i][j], -1.0});
      }

  // linking (15): MaxTF <= cap * X forces installation wherever flow runs
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) {
      auto& c = model.add_constraint(LpRelation::le, 0.0);
      c.terms.push_back({mtf_var[i][j], 1.0});
      c.terms.push_back({x_var[i][j], -link_cap});
    }

  // delay (16) per flow, skipped for the unbounded sentinel
  if (std::isfinite(g.delta())) {
    for (int k = 0; k < s; ++k)
      for (int r = 0; r < fv.flows; ++r) {
        auto& c = model.add_constraint(LpRelation::le, g.delta());
        for (std::size_t a = 0; a < fv.arcs.size(); ++a)
          c.terms.push_back(
              {fv.var(k, r, a), g.delay(fv.arcs[a].first, fv.arcs[a].second)});
      }
  }
  return model;
}

/// The polynomial variation: same flows and constraints (4)-(7), but the
/// objective charges every arc use separately and there are no installation
/// variables or delay bounds.
template <CostGraph G>
LpModel build_variation_lp(const G& g, int redundancy) {
  if (g.pmu().empty())
    throw std::invalid_argument("build_variation_lp: empty pmu");
  if (redundancy < 0)
    throw std::invalid_argument("build_variation_lp: negative R");

  LpModel model;
  model.meta = {detail::instance_hash(g, redundancy), redundancy, g.delta()};
  detail::FlowVars<G> fv(g, redundancy, model);
  for (int k = 0; k < fv.s; ++k)
    for (int r = 0; r < fv.flows; ++r)
      for (std::size_t a = 0; a < fv.arcs.size(); ++a)
        model.objective.push_back(
            {fv.var(k, r, a), g.cost(fv.arcs[a].first, fv.arcs[a].second)});
  fv.add_conservation(g, model);
  return model;
}

// ---------------------------------------------------------------------------
// LP text emission and a small grammar checker for it.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string lp_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline void append_terms(std::string& out, const std::vector<LpTerm>& terms,
                         const LpModel& model) {
  for (std::size_t t = 0; t < terms.size(); ++t) {
    double c = terms[t].coeff;
    if (t == 0) {
      out += (c < 0 ? "- " : "");
    } else {
      out += (c < 0 ? " - " : " + ");
    }
    out += lp_number(std::abs(c));
    out += ' ';
    out += model.variables[terms[t].var].name;
  }
}

}  // namespace detail

/// Deterministic LP text: Minimize / Subject To / Bounds / Binary / End.
/// Constraints appear in construction order; coefficients carry 9
/// significant digits; emission is byte-stable for equal models.
inline std::string emit_lp(const LpModel& model) {
  std::string out;
  out += "Minimize\n obj: ";
  detail::append_terms(out, model.objective, model);
  out += "\nSubject To\n";
  for (const auto& c : model.constraints) {
    out += ' ';
    out += c.name;
    out += ": ";
    detail::append_terms(out, c.terms, model);
    switch (c.rel) {
      case LpRelation::le: out += " <= "; break;
      case LpRelation::eq: out += " = "; break;
      case LpRelation::ge: out += " >= "; break;
    }
    out += detail::lp_number(c.rhs);
    out += '\n';
  }
  out += "Bounds\n";
  for (const auto& v : model.variables) {
    if (v.kind == VarKind::binary) continue;
    out += ' ';
    if (std::isfinite(v.ub)) {
      out += detail::lp_number(v.lb);
      out += " <= ";
      out += v.name;
      out += " <= ";
      out += detail::lp_number(v.ub);
    } else {
      out += v.name;
      out += " >= ";
      out += detail::lp_number(v.lb);
    }
    out += '\n';
  }
  out += "Binary\n";
  for (const auto& v : model.variables)
    if (v.kind == VarKind::binary) {
      out += ' ';
      out += v.name;
      out += '\n';
    }
  out += "End\n";
  return out;
}

/// Parse-back check of emitted LP text: section structure, term grammar and
/// that every referenced variable is declared in Bounds or Binary. Returns
/// an error description, or nullopt when the text is well formed.
inline std::optional<std::string> validate_lp_text(const std::string& text) {
  std::vector<std::string> lines;
  {
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
  }
  auto is_name = [](const std::string& tok) {
    if (tok.empty() || (!std::isalpha(tok[0]) && tok[0] != '_')) return false;
    for (char ch : tok)
      if (!std::isalnum(ch) && ch != '_') return false;
    return true;
  };
  auto is_number = [](const std::string& tok) {
    std::size_t pos = 0;
    try {
      (void)std::stod(tok, &pos);
    } catch (const std::exception&) {
      return false;
    }
    return pos == tok.size();
  };

  std::size_t at = 0;
  auto expect = [&](const std::string& header) -> std::optional<std::string> {
    if (at >= lines.size() || lines[at] != header)
      return "expected section '" + header + "' at line " +
             std::to_string(at + 1);
    ++at;
    return std::nullopt;
  };

  std::vector<std::vector<std::string>> expressions;
  auto parse_expression_line =
      [&](const std::string& line, bool needs_relation)
      -> std::optional<std::string> {
    std::stringstream ss(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    if (toks.size() < 2 || toks[0].back() != ':')
      return "bad expression line: " + line;
    std::size_t i = 1;
    std::vector<std::string> names;
    std::size_t rel_at = toks.size();
    for (std::size_t t = 1; t < toks.size(); ++t)
      if (toks[t] == "<=" || toks[t] == ">=" || toks[t] == "=") rel_at = t;
    std::size_t end = needs_relation ? rel_at : toks.size();
    if (needs_relation &&
        (rel_at == toks.size() || rel_at + 2 != toks.size() ||
         !is_number(toks[rel_at + 1])))
      return "bad relation in: " + line;
    while (i < end) {
      if (toks[i] == "+" || toks[i] == "-") {
        ++i;
        if (i >= end) return "dangling sign in: " + line;
      }
      if (!is_number(toks[i])) return "expected coefficient in: " + line;
      if (i + 1 >= end || !is_name(toks[i + 1]))
        return "expected variable name in: " + line;
      names.push_back(toks[i + 1]);
      i += 2;
    }
    if (names.empty()) return "empty expression in: " + line;
    expressions.push_back(std::move(names));
    return std::nullopt;
  };

  if (auto err = expect("Minimize")) return err;
  if (at >= lines.size()) return std::optional<std::string>{"missing objective"};
  if (auto err = parse_expression_line(lines[at], false)) return err;
  ++at;
  if (auto err = expect("Subject To")) return err;
  while (at < lines.size() && lines[at] != "Bounds") {
    if (auto err = parse_expression_line(lines[at], true)) return err;
    ++at;
  }
  if (auto err = expect("Bounds")) return err;
  std::vector<std::string> declared;
  while (at < lines.size() && lines[at] != "Binary") {
    std::stringstream ss(lines[at]);
    std::vector<std::string> toks;
    std::string tok;
    while (ss >> tok) toks.push_back(tok);
    if (toks.size() == 5 && toks[1] == "<=" && toks[3] == "<=" &&
        is_number(toks[0]) && is_name(toks[2]) && is_number(toks[4]))
      declared.push_back(toks[2]);
    else if (toks.size() == 3 && toks[1] == ">=" && is_name(toks[0]) &&
             is_number(toks[2]))
      declared.push_back(toks[0]);
    else
      return "bad bounds line: " + lines[at];
    ++at;
  }
  if (auto err = expect("Binary")) return err;
  while (at < lines.size() && lines[at] != "End") {
    std::stringstream ss(lines[at]);
    std::string name;
    ss >> name;
    std::string extra;
    if (!is_name(name) || (ss >> extra))
      return "bad binary line: " + lines[at];
    declared.push_back(name);
    ++at;
  }
  if (auto err = expect("End")) return err;

  std::sort(declared.begin(), declared.end());
  for (const auto& names : expressions)
    for (const auto& name : names)
      if (!std::binary_search(declared.begin(), declared.end(), name))
        return "undeclared variable: " + name;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Exact integer matrices and total unimodularity.
// ---------------------------------------------------------------------------

struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long long> data;  // row major
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), data(std::size_t(r) * c, 0) {
    for (int i = 0; i < r; ++i) row_labels.push_back("r" + std::to_string(i));
    for (int j = 0; j < c; ++j) col_labels.push_back("c" + std::to_string(j));
  }

  long long& at(int r, int c) { return data[std::size_t(r) * cols + c]; }
  long long at(int r, int c) const { return data[std::size_t(r) * cols + c]; }

  std::string to_csv() const {
    std::string out = "label";
    for (const auto& c : col_labels) out += "," + c;
    out += '\n';
    for (int r = 0; r < rows; ++r) {
      out += row_labels[r];
      for (int c = 0; c < cols; ++c) out += "," + std::to_string(at(r, c));
      out += '\n';
    }
    return out;
  }
};

/// Node-vs-directed-edge matrix: one column per arc with -1 at the tail and
/// +1 at the head.
inline IntMatrix incidence_matrix(int node_count,
                                  const std::vector<std::pair<int, int>>& arcs) {
  IntMatrix m(node_count, static_cast<int>(arcs.size()));
  for (int c = 0; c < m.cols; ++c) {
    auto [tail, head] = arcs[c];
    if (tail < 0 || head < 0 || tail >= node_count || head >= node_count ||
        tail == head)
      throw std::invalid_argument("incidence_matrix: bad arc");
    m.at(tail, c) = -1;
    m.at(head, c) = 1;
    m.col_labels[c] =
        "e_" + std::to_string(tail) + "_" + std::to_string(head);
  }
  for (int r = 0; r < node_count; ++r) m.row_labels[r] = "v" + std::to_string(r);
  return m;
}

/// Composite matrix [[A, 0], [0, A], [I, I]]: the constraint structure of
/// two disjoint flows coupled by per-arc capacity rows.
inline IntMatrix compose_cm(const IntMatrix& a) {
  for (long long v : a.data)
    if (v < -1 || v > 1)
      throw std::invalid_argument("compose_cm: entries must be in {-1,0,1}");
  IntMatrix m(2 * a.rows + a.cols, 2 * a.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int c = 0; c < a.cols; ++c) {
      m.at(r, c) = a.at(r, c);
      m.at(a.rows + r, a.cols + c) = a.at(r, c);
    }
  for (int c = 0; c < a.cols; ++c) {
    m.at(2 * a.rows + c, c) = 1;
    m.at(2 * a.rows + c, a.cols + c) = 1;
  }
  for (int r = 0; r < a.rows; ++r) {
    m.row_labels[r] = "f1_" + a.row_labels[r];
    m.row_labels[a.rows + r] = "f2_" + a.row_labels[r];
  }
  for (int c = 0; c < a.cols; ++c) {
    m.row_labels[2 * a.rows + c] = "cap_" + a.col_labels[c];
    m.col_labels[c] = "f1_" + a.col_labels[c];
    m.col_labels[a.cols + c] = "f2_" + a.col_labels[c];
  }
  return m;
}

/// Multi-composite matrix: one CM block per source on the diagonal (distinct
/// sources share no variables, so their blocks do not interact).
inline IntMatrix compose_mcm(const IntMatrix& a, int copies) {
  if (copies < 1) throw std::invalid_argument("compose_mcm: copies >= 1");
  IntMatrix cm = compose_cm(a);
  IntMatrix m(copies * cm.rows, copies * cm.cols);
  for (int k = 0; k < copies; ++k)
    for (int r = 0; r < cm.rows; ++r)
      for (int c = 0; c < cm.cols; ++c)
        m.at(k * cm.rows + r, k * cm.cols + c) = cm.at(r, c);
  for (int k = 0; k < copies; ++k) {
    for (int r = 0; r < cm.rows; ++r)
      m.row_labels[k * cm.rows + r] =
          "s" + std::to_string(k + 1) + "_" + cm.row_labels[r];
    for (int c = 0; c < cm.cols; ++c)
      m.col_labels[k * cm.cols + c] =
          "s" + std::to_string(k + 1) + "_" + cm.col_labels[c];
  }
  return m;
}

struct TumResult {
  bool tum = false;
  bool exhaustive = false;  // false when the sweep stopped at max_order
  int checked_order = 0;
  explicit operator bool() const { return tum; }
};

namespace detail {

// Exact determinant by fraction-free (Bareiss) elimination. Entries stay
// bounded by the matrix minors, far within 64 bits at these orders.
inline long long bareiss_det(std::vector<long long> m, int k) {
  long long prev = 1;
  long long sign = 1;
  for (int col = 0; col < k - 1; ++col) {
    int pivot = -1;
    for (int r = col; r < k; ++r)
      if (m[std::size_t(r) * k + col] != 0) {
        pivot = r;
        break;
      }
    if (pivot == -1) return 0;
    if (pivot != col) {
      for (int c = 0; c < k; ++c)
        std::swap(m[std::size_t(pivot) * k + c], m[std::size_t(col) * k + c]);
      sign = -sign;
    }
    for (int r = col + 1; r < k; ++r) {
      for (int c = col + 1; c < k; ++c)
        m[std::size_t(r) * k + c] =
            (m[std::size_t(r) * k + c] * m[std::size_t(col) * k + col] -
             m[std::size_t(r) * k + col] * m[std::size_t(col) * k + c]) /
            prev;
      m[std::size_t(r) * k + col] = 0;
    }
    prev = m[std::size_t(col) * k + col];
  }
  return sign * m[std::size_t(k - 1) * k + (k - 1)];
}

inline bool next_combination(std::vector<int>& idx, int limit) {
  int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < limit - (k - i)) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Brute-force total unimodularity test: every square submatrix of order up
/// to max_order must have determinant in {-1, 0, 1}. Exhaustive whenever
/// min(rows, cols) <= 8; larger matrices are swept up to max_order (default
/// 8) and the result carries exhaustive == false.
inline TumResult is_tum(const IntMatrix& m, int max_order = 0) {
  TumResult result;
  for (long long v : m.data)
    if (v < -1 || v > 1) return result;  // not even a candidate

  int full = std::min(m.rows, m.cols);
  int cap = max_order > 0 ? std::min(max_order, full) : std::min(full, 8);
  if (max_order == 0 && full <= 8) cap = full;
  result.exhaustive = cap == full;
  result.checked_order = cap;

  std::vector<long long> sub;
  for (int k = 1; k <= cap; ++k) {
    std::vector<int> rows_idx(k), cols_idx(k);
    for (int i = 0; i < k; ++i) rows_idx[i] = i;
    do {
      for (int i = 0; i < k; ++i) cols_idx[i] = i;
      do {
        sub.resize(std::size_t(k) * k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c)
            sub[std::size_t(r) * k + c] = m.at(rows_idx[r], cols_idx[c]);
        long long det = detail::bareiss_det(sub, k);
        if (det < -1 || det > 1) return result;
      } while (detail::next_combination(cols_idx, m.cols));
    } while (detail::next_combination(rows_idx, m.rows));
  }
  result.tum = true;
  return result;
}

}  // namespace cyclecover
