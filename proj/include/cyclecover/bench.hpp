#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cyclecover/approx.hpp"
#include "cyclecover/exact.hpp"
#include "cyclecover/instance.hpp"
#include "cyclecover/sweep.hpp"

namespace cyclecover {

// Benchmark in the style of the ratio tables: sample a PMU subset, restrict
// the instance to it, and compare SWEEP against the exact optimum (or the
// Christofides bound when the subset is beyond exact reach) across a grid of
// delay thresholds. The same sampled subsets are reused for every delta.

struct BenchConfig {
  std::vector<double> deltas;
  std::vector<double> fractions;  // each in (0, 1]
  std::vector<int> counts;        // alternative to fractions: exact sizes
  int trials = 3;
  std::uint64_t seed = 1;
  int exact_limit = 7;
};

struct BenchRow {
  std::string subset;  // "35%" or "n=46"
  double delta = 0.0;
  int trials_requested = 0;
  int trials_ok = 0;
  double sweep_mean = 0.0, sweep_std = 0.0;
  double opt_mean = 0.0, opt_std = 0.0;
  std::string opt_kind;  // "exact" or "christofides"
  double ratio_mean = 0.0, ratio_std = 0.0;
};

namespace detail {

inline int bench_thread_count() {
  if (const char* env = std::getenv("CYCLECOVER_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

struct TrialOutcome {
  bool ok = false;
  double sweep = 0.0;
  double opt = 0.0;
  bool opt_exact = true;
};

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return {mean, std::sqrt(var / xs.size())};
}

}  // namespace detail

inline std::vector<BenchRow> run_bench(const Instance& inst,
                                       const BenchConfig& config) {
  struct Subset {
    std::string label;
    std::vector<int> pmu;
  };

  // One family of sampled subsets per fraction/count, shared across deltas.
  std::vector<Subset> subsets;
  auto sample_sized = [&](int count, std::uint64_t stream) {
    // Same Fisher-Yates prefix as sample_pmu, with an explicit size.
    count = std::clamp(count, 1, inst.n());
    std::vector<int> ids(inst.n());
    for (int i = 0; i < inst.n(); ++i) ids[i] = i + 1;
    SplitMix64 rng(stream);
    for (int i = 0; i < count; ++i) {
      int j = i + static_cast<int>(
                      rng.bounded(static_cast<std::uint64_t>(inst.n() - i)));
      std::swap(ids[i], ids[j]);
    }
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  int family = 0;
  for (double fraction : config.fractions) {
    for (int t = 0; t < config.trials; ++t) {
      std::uint64_t stream = SplitMix64(config.seed).split(family * 1000 + t).state;
      subsets.push_back(
          {std::to_string(static_cast<int>(std::round(fraction * 100))) + "%",
           sample_pmu(inst, fraction, stream).pmu()});
    }
    ++family;
  }
  for (int count : config.counts) {
    for (int t = 0; t < config.trials; ++t) {
      std::uint64_t stream = SplitMix64(config.seed).split(family * 1000 + t).state;
      subsets.push_back({"n=" + std::to_string(count),
                         sample_sized(count, stream)});
    }
    ++family;
  }

  const int families = family;
  const int deltas = static_cast<int>(config.deltas.size());
  std::vector<detail::TrialOutcome> outcomes(
      static_cast<std::size_t>(families) * config.trials * deltas);

  // Trials are independent; run them on a small worker pool and fold the
  // results in deterministic order afterwards.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      std::size_t task = next.fetch_add(1);
      if (task >= outcomes.size()) break;
      std::size_t subset_index = task / deltas;
      double delta = config.deltas[task % deltas];
      const Subset& subset = subsets[subset_index];
      detail::TrialOutcome& out = outcomes[task];
      try {
        Instance sub =
            restrict_to_pmu(inst.with_pmu(subset.pmu)).with_delta(delta);
        CycleCover sweep = sweep_solve(sub);
        out.sweep = sweep.cost;
        if (sub.n() <= config.exact_limit) {
          ExactOptions options;
          options.limit = config.exact_limit;
          auto exact = exact_rdcmccc(sub, VerifyMode::cycle_delta, options);
          if (!exact.feasible) continue;
          out.opt = exact.cost;
          out.opt_exact = true;
        } else {
          out.opt = christofides_tour(sub).length;
          out.opt_exact = false;
        }
        out.ok = true;
      } catch (const infeasible_error&) {
        // sweep cannot cover some point within delta; trial is skipped
      } catch (const std::exception&) {
        // a failed trial must not take the worker thread down with it
      }
    }
  };
  int nthreads = std::min<int>(detail::bench_thread_count(),
                               static_cast<int>(outcomes.size()) + 1);
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<BenchRow> rows;
  for (int f = 0; f < families; ++f)
    for (int d = 0; d < deltas; ++d) {
      BenchRow row;
      row.subset = subsets[static_cast<std::size_t>(f) * config.trials].label;
      row.delta = config.deltas[d];
      row.trials_requested = config.trials;
      std::vector<double> sweep_costs, opt_costs, ratios;
      bool all_exact = true;
      for (int t = 0; t < config.trials; ++t) {
        const auto& out = outcomes[(static_cast<std::size_t>(f) *
                                        config.trials + t) * deltas + d];
        if (!out.ok) continue;
        sweep_costs.push_back(out.sweep);
        opt_costs.push_back(out.opt);
        ratios.push_back(out.sweep / out.opt);
        all_exact = all_exact && out.opt_exact;
      }
      row.trials_ok = static_cast<int>(sweep_costs.size());
      row.opt_kind = all_exact ? "exact" : "christofides";
      std::tie(row.sweep_mean, row.sweep_std) = detail::mean_std(sweep_costs);
      std::tie(row.opt_mean, row.opt_std) = detail::mean_std(opt_costs);
      std::tie(row.ratio_mean, row.ratio_std) = detail::mean_std(ratios);
      rows.push_back(std::move(row));
    }
  return rows;
}

inline std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "subset,delta,trials,trials_ok,sweep_mean,sweep_std,opt_mean,opt_std,"
      "opt_kind,ratio_mean,ratio_std\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%.10g,%d,%d,%.6f,%.6f,%.6f,%.6f,%s,%.6f,%.6f\n",
                  r.subset.c_str(), r.delta, r.trials_requested, r.trials_ok,
                  r.sweep_mean, r.sweep_std, r.opt_mean, r.opt_std,
                  r.opt_kind.c_str(), r.ratio_mean, r.ratio_std);
    out += buf;
  }
  return out;
}

}  // namespace cyclecover
