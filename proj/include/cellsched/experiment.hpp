#ifndef CELLSCHED_EXPERIMENT_HPP
#define CELLSCHED_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cellsched/algorithms.hpp"
#include "cellsched/instance_io.hpp"
#include "cellsched/netgen.hpp"

namespace cellsched::experiment {

namespace detail {

inline std::string fmt(double v) {
  if (std::isinf(v)) return "inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

template <typename F>
void parallel_for(int count, int jobs, F&& body) {
  jobs = std::max(1, jobs);
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, count);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count && !failed; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

struct RunOptions {
  netgen::GenConfig base;
  std::vector<std::string> algos = {"ocs", "near", "allon", "tdma"};
  std::vector<double> t_values = {2.0};
  std::vector<MPolicy> m_values = {MPolicy::uniform_m(5)};  // used by near
  int instances = 1;
  int jobs = 1;
  bool force_exact = false;
  bool timing = false;  // adds a wall_ms column (non-deterministic)
  std::string out_dir = ".";
};

struct RunRow {
  std::uint64_t seed = 0;
  int instance = 0;
  std::string algo;
  double t = 0;
  std::string m = "-";
  double energy = 0;
  bool feasible = false;
  int iterations = 0;
  int active_columns = 0;
  double wall_ms = 0;
};

/// Exact-pricing OCS is gated on larger networks; the scan is exponential in
/// the cell count.
inline constexpr int kExactCliCellLimit = 12;

inline void require_exact_allowed(const RunOptions& opt, int cell_count) {
  if (cell_count > kExactCliCellLimit && !opt.force_exact &&
      std::find(opt.algos.begin(), opt.algos.end(), "ocs") != opt.algos.end())
    throw std::invalid_argument(
        "exact ocs on networks beyond " + std::to_string(kExactCliCellLimit) +
        " cells is long-running; pass --force-exact to allow it");
}

inline std::string results_header(bool timing) {
  std::string h = "seed,instance,algo,T,M,energy_j,feasible,iterations,active_columns";
  if (timing) h += ",wall_ms";
  return h;
}

/// Runs the algorithm suite over seeded instances and a T (and M) sweep.
/// Rows come out ordered by (instance, algo, T, M) no matter how the work
/// was scheduled across threads.
inline std::vector<RunRow> run_suite(const RunOptions& opt) {
  using clock = std::chrono::steady_clock;
  require_exact_allowed(opt,
                        static_cast<int>(netgen::layout_centers(opt.base).size()));
  const std::vector<MPolicy> no_policy = {MPolicy{}};
  std::vector<std::vector<RunRow>> per_instance(opt.instances);
  detail::parallel_for(opt.instances, opt.jobs, [&](int idx) {
    netgen::GenConfig cfg = opt.base;
    cfg.seed = opt.base.seed + static_cast<std::uint64_t>(idx);
    NetworkInstance net = netgen::generate(cfg);
    std::vector<RunRow>& rows = per_instance[idx];
    for (const std::string& algo : opt.algos) {
      for (double t : opt.t_values) {
        net.deadline = t;
        const bool uses_m = algo == "near";
        const std::vector<MPolicy>& policies = uses_m ? opt.m_values : no_policy;
        for (std::size_t mi = 0; mi < policies.size(); ++mi) {
          RunRow row;
          row.seed = cfg.seed;
          row.instance = idx;
          row.algo = algo;
          row.t = t;
          const auto t0 = clock::now();
          SolveReport rep;
          if (algo == "ocs") {
            rep = ocs(net);
          } else if (algo == "tdma") {
            rep = tdma(net);
          } else if (algo == "allon") {
            rep = all_on(net);
          } else if (algo == "near") {
            row.m = policies[mi].describe();
            rep = near(net, policies[mi]);
          } else {
            throw std::invalid_argument("unknown algorithm: " + algo);
          }
          row.wall_ms = 1e3 * std::chrono::duration<double>(clock::now() - t0).count();
          row.energy = rep.energy;
          row.feasible = rep.feasible();
          row.iterations = rep.iterations;
          row.active_columns = static_cast<int>(rep.schedule.entries.size());
          rows.push_back(std::move(row));
        }
      }
    }
    // order within the instance: (algo, T, M)
    std::stable_sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
      if (a.algo != b.algo) return a.algo < b.algo;
      if (a.t != b.t) return a.t < b.t;
      return a.m < b.m;
    });
  });
  std::vector<RunRow> all;
  for (auto& rows : per_instance)
    for (auto& r : rows) all.push_back(std::move(r));
  return all;
}

inline std::string rows_to_csv(const std::vector<RunRow>& rows, bool timing) {
  std::ostringstream os;
  os << results_header(timing) << '\n';
  for (const RunRow& r : rows) {
    os << r.seed << ',' << r.instance << ',' << r.algo << ',' << detail::fmt(r.t) << ',' << r.m
       << ',' << detail::fmt(r.energy) << ',' << (r.feasible ? 1 : 0) << ',' << r.iterations
       << ',' << r.active_columns;
    if (timing) os << ',' << detail::fmt(r.wall_ms);
    os << '\n';
  }
  return os.str();
}

/// Aggregate means per (algo, T, M) over feasible rows.
inline std::string aggregate_csv(const std::vector<RunRow>& rows) {
  struct Agg {
    int total = 0;
    int feasible = 0;
    double energy = 0;
  };
  std::map<std::tuple<std::string, double, std::string>, Agg> agg;
  for (const RunRow& r : rows) {
    Agg& a = agg[{r.algo, r.t, r.m}];
    ++a.total;
    if (r.feasible) {
      ++a.feasible;
      a.energy += r.energy;
    }
  }
  std::ostringstream os;
  os << "algo,T,M,instances,feasible,mean_energy_j\n";
  for (const auto& [key, a] : agg) {
    os << std::get<0>(key) << ',' << detail::fmt(std::get<1>(key)) << ',' << std::get<2>(key)
       << ',' << a.total << ',' << a.feasible << ','
       << (a.feasible ? detail::fmt(a.energy / a.feasible) : "") << '\n';
  }
  return os.str();
}

struct BoundRunOptions {
  netgen::GenConfig base;
  std::vector<MPolicy> m_values = {MPolicy::uniform_m(1), MPolicy::uniform_m(3),
                                   MPolicy::uniform_m(5)};
  std::vector<double> t_values = {2.5};
  int instances = 1;
  int jobs = 1;
  bool with_ocs = false;  // include the exact optimum column (hex-7 scale)
  std::string out_dir = ".";
};

struct BoundRow {
  std::uint64_t seed = 0;
  int instance = 0;
  std::string m;
  double t = 0;
  double e_le_off = 0, e_le_on = 0, e_near = 0, e_ocs = 0;
  bool off_feasible = false, on_feasible = false, ocs_feasible = false;
  double gap = 0;  // NaN when a side is infeasible
};

inline std::vector<BoundRow> run_bound_suite(const BoundRunOptions& opt) {
  std::vector<std::vector<BoundRow>> per_instance(opt.instances);
  detail::parallel_for(opt.instances, opt.jobs, [&](int idx) {
    netgen::GenConfig cfg = opt.base;
    cfg.seed = opt.base.seed + static_cast<std::uint64_t>(idx);
    NetworkInstance net = netgen::generate(cfg);
    for (double t : opt.t_values) {
      net.deadline = t;
      SolveReport exact;
      if (opt.with_ocs) exact = ocs(net);
      for (const MPolicy& policy : opt.m_values) {
        const BoundReport b = bound(net, policy);
        BoundRow row;
        row.seed = cfg.seed;
        row.instance = idx;
        row.m = policy.describe();
        row.t = t;
        row.e_le_off = b.e_le_off;
        row.e_le_on = b.e_le_on;
        row.e_near = b.e_near;
        row.off_feasible = b.off_feasible;
        row.on_feasible = b.on_feasible;
        row.gap = b.gap();
        if (opt.with_ocs) {
          row.ocs_feasible = exact.feasible();
          row.e_ocs = exact.energy;
        }
        per_instance[idx].push_back(std::move(row));
      }
    }
  });
  std::vector<BoundRow> all;
  for (auto& rows : per_instance)
    for (auto& r : rows) all.push_back(std::move(r));
  return all;
}

inline std::string bound_rows_to_csv(const std::vector<BoundRow>& rows, bool with_ocs) {
  std::ostringstream os;
  os << "seed,instance,M,T,e_le_off_j,e_le_on_j,e_near_j,gap";
  if (with_ocs) os << ",e_ocs_j";
  os << '\n';
  for (const BoundRow& r : rows) {
    os << r.seed << ',' << r.instance << ',' << r.m << ',' << detail::fmt(r.t) << ','
       << (r.off_feasible ? detail::fmt(r.e_le_off) : "inf") << ','
       << (r.on_feasible ? detail::fmt(r.e_le_on) : "inf") << ','
       << (r.on_feasible ? detail::fmt(r.e_near) : "inf") << ',' << detail::fmt(r.gap);
    if (with_ocs) os << ',' << (r.ocs_feasible ? detail::fmt(r.e_ocs) : "inf");
    os << '\n';
  }
  return os.str();
}

inline std::string bound_aggregate_csv(const std::vector<BoundRow>& rows) {
  struct Agg {
    int total = 0;
    int finite = 0;
    double gap = 0;
  };
  std::map<std::string, Agg> agg;
  for (const BoundRow& r : rows) {
    Agg& a = agg[r.m];
    ++a.total;
    if (r.off_feasible && r.on_feasible) {
      ++a.finite;
      a.gap += r.gap;
    }
  }
  std::ostringstream os;
  os << "M,runs,finite,mean_gap_percent\n";
  for (const auto& [m, a] : agg) {
    os << m << ',' << a.total << ',' << a.finite << ','
       << (a.finite ? detail::fmt(100.0 * a.gap / a.finite) : "") << '\n';
  }
  return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

/// Full `run` entry point: emits results.csv, aggregate.csv and summary.txt
/// under out_dir.
inline void write_run_artifacts(const RunOptions& opt, const std::vector<RunRow>& rows,
                                double wall_seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  write_file((fs::path(opt.out_dir) / "results.csv").string(), rows_to_csv(rows, opt.timing));
  write_file((fs::path(opt.out_dir) / "aggregate.csv").string(), aggregate_csv(rows));
  std::ostringstream sum;
  sum << "cellsched run summary\n";
  sum << "layout " << netgen::to_string(opt.base.layout) << ", instances " << opt.instances
      << ", base seed " << opt.base.seed << "\n";
  sum << "total wall time: " << detail::fmt(wall_seconds) << " s\n\n";
  sum << aggregate_csv(rows);
  write_file((fs::path(opt.out_dir) / "summary.txt").string(), sum.str());
}

inline void write_bound_artifacts(const BoundRunOptions& opt, const std::vector<BoundRow>& rows,
                                  double wall_seconds) {
  namespace fs = std::filesystem;
  fs::create_directories(opt.out_dir);
  write_file((fs::path(opt.out_dir) / "bound.csv").string(),
             bound_rows_to_csv(rows, opt.with_ocs));
  write_file((fs::path(opt.out_dir) / "bound_aggregate.csv").string(), bound_aggregate_csv(rows));
  std::ostringstream sum;
  sum << "cellsched bound summary\n";
  sum << "layout " << netgen::to_string(opt.base.layout) << ", instances " << opt.instances
      << ", base seed " << opt.base.seed << "\n";
  sum << "total wall time: " << detail::fmt(wall_seconds) << " s\n\n";
  sum << bound_aggregate_csv(rows);
  write_file((fs::path(opt.out_dir) / "summary.txt").string(), sum.str());
}

}  // namespace cellsched::experiment

#endif  // CELLSCHED_EXPERIMENT_HPP
