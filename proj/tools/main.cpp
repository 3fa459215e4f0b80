#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cyclecover/cli.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int write_or_print(const std::string& text, const std::string& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << output_path << "\n";
    return 1;
  }
  out << text;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Delay-constrained cycle cover designer for PMU backhaul"};
  app.require_subcommand(1);

  using namespace cyclecover::cli;

  // solve
  SolveArgs solve_args;
  std::string solve_input;
  auto* solve = app.add_subcommand("solve", "Run a solver on a CSV instance");
  solve->add_option("--input", solve_input, "instance CSV")->required();
  solve->add_option("--delta", solve_args.delta, "delay threshold")->required();
  solve->add_option("--solver", solve_args.solver,
                    "sweep|exact|christofides|doubletree");
  solve->add_option("--mode", solve_args.mode, "cycle|cycle-strict|path");
  solve->add_option("--seed", solve_args.seed, "pmu sampling seed");
  double solve_fraction = 0.0;
  auto* frac_opt = solve->add_option("--pmu-fraction", solve_fraction,
                                     "sample this fraction and solve on it");
  solve->add_option("--exact-limit", solve_args.exact_limit,
                    "point cap for the exact solver");

  // verify
  VerifyArgs verify_args;
  std::string verify_input, verify_design;
  auto* verify = app.add_subcommand("verify", "Check a design against delta");
  verify->add_option("--input", verify_input, "instance CSV")->required();
  verify->add_option("--delta", verify_args.delta, "delay threshold")->required();
  verify->add_option("--design", verify_design, "design JSON file")->required();
  verify->add_option("--mode", verify_args.mode, "cycle|cycle-strict|path");
  verify->add_flag("--fault-injection", verify_args.fault_injection,
                   "also run single-link failure analysis");

  // bench
  BenchArgs bench_args;
  std::string bench_input;
  auto* bench = app.add_subcommand("bench", "Sweep-vs-optimal ratio table");
  bench->add_option("--input", bench_input, "instance CSV")->required();
  bench->add_option("--deltas", bench_args.deltas, "delay thresholds")
      ->required()
      ->delimiter(',');
  bench->add_option("--fractions", bench_args.fractions, "pmu fractions")
      ->delimiter(',');
  bench->add_option("--counts", bench_args.counts, "explicit pmu counts")
      ->delimiter(',');
  bench->add_option("--trials", bench_args.trials, "samples per subset size");
  bench->add_option("--seed", bench_args.seed, "sampling seed");
  bench->add_option("--exact-limit", bench_args.exact_limit,
                    "largest subset solved exactly");

  // emit-lp
  EmitLpArgs emit_args;
  std::string emit_input, emit_output;
  auto* emit = app.add_subcommand("emit-lp", "Write the ILP in LP format");
  emit->add_option("--input", emit_input, "instance CSV")->required();
  emit->add_option("--delta", emit_args.delta, "delay threshold")->required();
  emit->add_option("--redundancy,-R", emit_args.redundancy, "fault tolerance R");
  emit->add_flag("--variation", emit_args.variation,
                 "emit the multiplicity-counting variation instead");
  emit->add_flag("--literal-maxtf", emit_args.literal_maxtf,
                 "use the tighter s multiplier in the linking constraint");
  double emit_fraction = 0.0;
  auto* emit_frac = emit->add_option("--pmu-fraction", emit_fraction,
                                     "sample a pmu subset first");
  emit->add_option("--seed", emit_args.seed, "pmu sampling seed");
  emit->add_option("-o,--output", emit_output, "output path (default stdout)");

  // reduce-hc
  ReduceHcArgs reduce_args;
  std::string reduce_input;
  auto* reduce = app.add_subcommand("reduce-hc",
                                    "Hamiltonicity via the cycle-cover reduction");
  reduce->add_option("--graph", reduce_input, "edge list file")->required();
  reduce->add_option("--limit", reduce_args.limit, "exact solver point cap");

  // plot
  PlotArgs plot_args;
  std::string plot_input, plot_design, plot_output;
  auto* plot = app.add_subcommand("plot", "Render a design as SVG");
  plot->add_option("--input", plot_input, "instance CSV")->required();
  plot->add_option("--design", plot_design, "design JSON file")->required();
  plot->add_option("-o,--output", plot_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (*solve) {
      if (*frac_opt) solve_args.pmu_fraction = solve_fraction;
      return cmd_solve(solve_args, read_file(solve_input), std::cout,
                       std::cerr);
    }
    if (*verify)
      return cmd_verify(verify_args, read_file(verify_input),
                        read_file(verify_design), std::cout, std::cerr);
    if (*bench)
      return cmd_bench(bench_args, read_file(bench_input), std::cout,
                       std::cerr);
    if (*emit) {
      if (*emit_frac) emit_args.pmu_fraction = emit_fraction;
      std::ostringstream out;
      int code = cmd_emit_lp(emit_args, read_file(emit_input), out, std::cerr);
      if (code != 0) return code;
      return write_or_print(out.str(), emit_output);
    }
    if (*reduce)
      return cmd_reduce_hc(reduce_args, read_file(reduce_input), std::cout,
                           std::cerr);
    if (*plot) {
      std::ostringstream out;
      int code = cmd_plot(plot_args, read_file(plot_input),
                          read_file(plot_design), out, std::cerr);
      if (code != 0) return code;
      return write_or_print(out.str(), plot_output);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
