#pragma once

#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cyclecover/approx.hpp"
#include "cyclecover/bench.hpp"
#include "cyclecover/design_io.hpp"
#include "cyclecover/exact.hpp"
#include "cyclecover/ilp.hpp"
#include "cyclecover/instance.hpp"
#include "cyclecover/svg.hpp"
#include "cyclecover/sweep.hpp"

// Command implementations behind the cyclecover binary. They take input text
// and write to streams so the test suite can drive them in-process; the thin
// main() in tools/ only parses flags and reads files. Exit-code contract:
// 0 feasible, 2 infeasible, 1 usage or input error.

namespace cyclecover::cli {

inline std::string format_cost(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

inline std::optional<VerifyMode> parse_mode(const std::string& name) {
  if (name == "cycle") return VerifyMode::cycle_delta;
  if (name == "cycle-strict") return VerifyMode::cycle_delta_strict;
  if (name == "path") return VerifyMode::path_delta;
  return std::nullopt;
}

struct SolveArgs {
  double delta = 0.0;
  std::string solver = "sweep";
  std::string mode = "cycle";
  std::uint64_t seed = 1;
  std::optional<double> pmu_fraction;
  int exact_limit = 7;
};

inline int cmd_solve(const SolveArgs& args, const std::string& csv_text,
                     std::ostream& out, std::ostream& err) {
  try {
    auto loaded = load_points(csv_text, sniff_projection(csv_text), args.delta);
    for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
    Instance inst = loaded.instance;
    if (args.pmu_fraction)
      inst = restrict_to_pmu(sample_pmu(inst, *args.pmu_fraction, args.seed));
    auto mode = parse_mode(args.mode);
    if (!mode) {
      err << "unknown mode: " << args.mode << "\n";
      return 1;
    }

    auto finish = [&](const CycleCover& cover) {
      bool feasible = verify_cover(inst, cover, *mode).feasible;
      out << design_to_json(cover).dump() << "\n";
      out << "solver=" << args.solver << " cost=" << format_cost(cover.cost)
          << " cycles=" << cover.cycles.size()
          << " feasible=" << (feasible ? "true" : "false") << "\n";
      return feasible ? 0 : 2;
    };

    if (args.solver == "sweep") {
      try {
        return finish(sweep_solve(inst));
      } catch (const infeasible_error& e) {
        err << e.what() << "\n";
        out << "solver=sweep cost=inf cycles=0 feasible=false\n";
        return 2;
      }
    }
    if (args.solver == "exact") {
      ExactOptions options;
      options.limit = args.exact_limit;
      auto res = exact_rdcmccc(inst, *mode, options);
      if (!res.feasible) {
        out << "solver=exact cost=inf cycles=0 feasible=false\n";
        return 2;
      }
      return finish(cover_from_edges(inst, res.edges, *mode));
    }
    if (args.solver == "christofides" || args.solver == "doubletree") {
      Tour tour = args.solver == "christofides" ? christofides_tour(inst)
                                                : double_tree_tour(inst);
      auto design = tour_as_design(inst, tour);
      if (!design) {
        // tour exceeds delta: report the bound, not a design
        nlohmann::json j;
        j["tour"] = tour.order;
        j["length"] = tour.length;
        j["matching_exact"] = tour.matching_exact;
        out << j.dump() << "\n";
        out << "solver=" << args.solver << " cost=" << format_cost(tour.length)
            << " cycles=0 feasible=false\n";
        return 2;
      }
      return finish(*design);
    }
    err << "unknown solver: " << args.solver << "\n";
    return 1;
  } catch (const limit_exceeded_error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

struct VerifyArgs {
  double delta = 0.0;
  std::string mode = "cycle";
  bool fault_injection = false;
};

inline int cmd_verify(const VerifyArgs& args, const std::string& csv_text,
                      const std::string& design_text, std::ostream& out,
                      std::ostream& err) {
  try {
    auto loaded = load_points(csv_text, sniff_projection(csv_text), args.delta);
    auto mode = parse_mode(args.mode);
    if (!mode) {
      err << "unknown mode: " << args.mode << "\n";
      return 1;
    }
    Design design = design_from_text(design_text);
    auto report = verify_cover(loaded.instance, design.edges, *mode);
    out << "feasible: " << (report.feasible ? "yes" : "no") << "\n";
    out << "worst_slack: " << format_cost(report.worst_slack) << "\n";
    if (!report.degenerate_only_nodes.empty()) {
      out << "degenerate_only_nodes:";
      for (int u : report.degenerate_only_nodes) out << " " << u;
      out << "\n";
    }
    for (const auto& v : report.violations)
      out << "violation: node=" << v.node << " " << v.reason << "\n";
    bool ok = report.feasible;
    if (args.fault_injection) {
      auto fi = fault_injection(loaded.instance, design.edges);
      out << "fault_injection: " << (fi.feasible ? "pass" : "fail") << "\n";
      for (const auto& v : fi.violations)
        out << "fault: node=" << v.node << " " << v.reason << "\n";
      ok = ok && fi.feasible;
    }
    return ok ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

struct BenchArgs {
  std::vector<double> deltas;
  std::vector<double> fractions;
  std::vector<int> counts;
  int trials = 3;
  std::uint64_t seed = 1;
  int exact_limit = 7;
};

inline int cmd_bench(const BenchArgs& args, const std::string& csv_text,
                     std::ostream& out, std::ostream& err) {
  try {
    if (args.deltas.empty() || (args.fractions.empty() && args.counts.empty())) {
      err << "bench needs --deltas and --fractions or --counts\n";
      return 1;
    }
    // delta is re-set per cell; the load value only needs to be positive
    auto loaded = load_points(csv_text, sniff_projection(csv_text),
                              args.deltas.front());
    BenchConfig config;
    config.deltas = args.deltas;
    config.fractions = args.fractions;
    config.counts = args.counts;
    config.trials = args.trials;
    config.seed = args.seed;
    config.exact_limit = args.exact_limit;
    out << bench_csv(run_bench(loaded.instance, config));
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

struct EmitLpArgs {
  double delta = 0.0;
  int redundancy = 1;
  bool variation = false;
  bool literal_maxtf = false;
  std::optional<double> pmu_fraction;
  std::uint64_t seed = 1;
};

inline int cmd_emit_lp(const EmitLpArgs& args, const std::string& csv_text,
                       std::ostream& out, std::ostream& err) {
  try {
    auto loaded = load_points(csv_text, sniff_projection(csv_text), args.delta);
    Instance inst = loaded.instance;
    if (args.pmu_fraction)
      inst = sample_pmu(inst, *args.pmu_fraction, args.seed);
    LpModel model;
    if (args.variation) {
      model = build_variation_lp(inst, args.redundancy);
    } else {
      IlpOptions options;
      options.classic_maxtf_bound = args.literal_maxtf;
      model = build_ilp(inst, args.redundancy, options);
    }
    std::string text = emit_lp(model);
    if (auto bad = validate_lp_text(text)) {
      err << "internal error: emitted text failed validation: " << *bad << "\n";
      return 1;
    }
    out << text;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

struct ReduceHcArgs {
  int limit = 7;
};

inline int cmd_reduce_hc(const ReduceHcArgs& args, const std::string& graph_text,
                         std::ostream& out, std::ostream& err) {
  try {
    HcGraph g = read_hc_graph(graph_text);
    out << "hamiltonian: " << (decide_hc(g, args.limit) ? "yes" : "no") << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

struct PlotArgs {
  double delta = 1.0;  // only used to construct the instance
};

inline int cmd_plot(const PlotArgs& args, const std::string& csv_text,
                    const std::string& design_text, std::ostream& out,
                    std::ostream& err) {
  try {
    auto loaded = load_points(csv_text, sniff_projection(csv_text), args.delta);
    Design design = design_from_text(design_text);
    out << render_design_svg(loaded.instance, design.cycles, design.edges);
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cyclecover::cli
