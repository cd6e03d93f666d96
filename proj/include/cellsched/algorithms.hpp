#ifndef CELLSCHED_ALGORITHMS_HPP
#define CELLSCHED_ALGORITHMS_HPP

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include "cellsched/master.hpp"
#include "cellsched/model.hpp"
#include "cellsched/pricing_exact.hpp"
#include "cellsched/pricing_local.hpp"

namespace cellsched {

enum class Termination : std::uint8_t { Converged, Infeasible, IterationCap };

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Converged: return "converged";
    case Termination::Infeasible: return "infeasible";
    case Termination::IterationCap: return "iteration-cap";
  }
  return "?";
}

struct SolveReport {
  std::string algorithm;
  Termination termination = Termination::Infeasible;
  double energy = std::numeric_limits<double>::infinity();  // joules
  Schedule schedule;
  int iterations = 0;          // pricing rounds
  double pricing_seconds = 0;
  bool feasible() const { return termination == Termination::Converged; }
};

namespace detail {

inline int log_level() {
  static const int level = [] {
    const char* v = std::getenv("CELLSCHED_LOG");
    return v ? std::atoi(v) : 0;
  }();
  return level;
}

inline Schedule schedule_from(const MasterState& st) {
  Schedule s;
  for (std::size_t c = 0; c < st.columns.size(); ++c) {
    if (st.duration[c] > 0) {
      s.entries.push_back({st.columns[c], st.duration[c]});
      s.total_energy += st.columns[c].power * st.duration[c];
    }
  }
  return s;
}

struct CgOptions {
  double eps_rc = kReducedCostEps;
  int max_rounds = 10000;
  const char* tag = "cg";
};

struct CgOutcome {
  MasterState state;
  Termination termination = Termination::Infeasible;
  int rounds = 0;
  double pricing_seconds = 0;
};

/// Column generation around the restricted master. When the held columns
/// cannot meet the demands within T, columns are first generated against the
/// shortfall master (zero column costs); if no column can still reduce the
/// shortfall, the instance is infeasible for this rate model — that is a
/// certificate, since pricing searches the complete column universe.
template <typename PriceFn>
CgOutcome run_column_generation(const NetworkInstance& net, std::vector<Column> columns,
                                PriceFn&& price, const CgOptions& opts) {
  using clock = std::chrono::steady_clock;
  CgOutcome out;
  auto priced = [&](const DualPrices& duals, bool phase1) {
    const auto t0 = clock::now();
    PricedColumn pc = price(duals, phase1);
    out.pricing_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    return pc;
  };

  MasterState st = solve_master(net, columns);
  while (st.status != lp::Status::Optimal) {
    MasterState feas = solve_master_feasibility(net, columns);
    if (++out.rounds > opts.max_rounds) {
      out.state = std::move(feas);
      out.termination = Termination::IterationCap;
      return out;
    }
    PricedColumn pc = priced(feas.duals, true);
    if (log_level() >= 2)
      std::cerr << "[" << opts.tag << "] round " << out.rounds << " shortfall "
                << feas.shortfall_bits << " bits, rc " << pc.reduced_cost << "\n";
    if (pc.reduced_cost >= -opts.eps_rc || !add_column(columns, std::move(pc.column))) {
      out.state = std::move(feas);
      out.termination = Termination::Infeasible;
      return out;
    }
    st = solve_master(net, columns);
  }

  while (true) {
    PricedColumn pc = priced(st.duals, false);
    ++out.rounds;
    if (log_level() >= 2)
      std::cerr << "[" << opts.tag << "] round " << out.rounds << " objective " << st.objective
                << " J, rc " << pc.reduced_cost << "\n";
    if (pc.reduced_cost >= -opts.eps_rc) {
      out.termination = Termination::Converged;
      break;
    }
    if (out.rounds > opts.max_rounds) {
      out.termination = Termination::IterationCap;
      break;
    }
    if (!add_column(columns, std::move(pc.column))) {
      out.termination = Termination::Converged;
      break;
    }
    st = solve_master(net, columns);
  }
  out.state = std::move(st);
  return out;
}

inline SolveReport report_from(const char* algorithm, const CgOutcome& cg) {
  SolveReport rep;
  rep.algorithm = algorithm;
  rep.termination = cg.termination;
  rep.iterations = cg.rounds;
  rep.pricing_seconds = cg.pricing_seconds;
  if (cg.termination == Termination::Converged) {
    rep.schedule = schedule_from(cg.state);
    rep.energy = rep.schedule.total_energy;
  }
  return rep;
}

}  // namespace detail

struct OcsOptions {
  InitialColumns preset = InitialColumns::SingletonsAndFull;
  std::vector<Column> custom_initial;     // overrides preset when nonempty
  const MasterState* warm_start = nullptr;
  double eps_rc = kReducedCostEps;
  int max_rounds = 10000;
  int exact_limit = 20;
};

/// Optimal cell clustering and scheduling: exact column generation with the
/// all-cluster pricing scan. Converged energy is the global optimum.
inline SolveReport ocs(const NetworkInstance& net, const OcsOptions& opts = {}) {
  std::vector<Column> columns;
  if (opts.warm_start) {
    for (Column held : opts.warm_start->columns) {
      bool valid = held.cluster.subset_of(Cluster::full(net.cell_count));
      for (const auto& [cell, j] : held.served)
        valid = valid && j < net.user_count() && net.cell_of_user[j] == cell;
      if (!valid) continue;  // stale column from a removed user or cell
      held.rate.resize(net.user_count(), 0.0);  // new users enter at rate 0
      columns.push_back(std::move(held));
    }
    if (columns.empty()) columns = initial_columns(net, opts.preset);
  } else if (!opts.custom_initial.empty()) {
    columns = opts.custom_initial;
  } else {
    columns = initial_columns(net, opts.preset);
  }
  VertexRateCache cache;
  auto price = [&](const DualPrices& duals, bool phase1) {
    return price_all(net, duals, {opts.exact_limit, phase1, &cache});
  };
  const auto cg = detail::run_column_generation(net, std::move(columns), price,
                                                {opts.eps_rc, opts.max_rounds, "ocs"});
  return detail::report_from("ocs", cg);
}

/// One base station at a time, each user served individually at its maximum
/// rate. Optimal whenever it fits in the deadline; the energy is reported
/// even when it does not.
inline SolveReport tdma(const NetworkInstance& net) {
  SolveReport rep;
  rep.algorithm = "tdma";
  double total_time = 0;
  for (int i = 0; i < net.cell_count; ++i) {
    for (int j : net.users_of_cell[i]) {
      const int served[] = {j};
      Column col = make_column(net, Cluster::single(i), served);
      const double t = net.demand[j] / col.rate[j];
      rep.schedule.entries.push_back({std::move(col), t});
      total_time += t;
    }
  }
  for (const auto& e : rep.schedule.entries)
    rep.schedule.total_energy += e.column.power * e.duration;
  rep.energy = rep.schedule.total_energy;
  rep.termination = total_time <= net.deadline + kFeasEps ? Termination::Converged
                                                          : Termination::Infeasible;
  return rep;
}

/// Minimal completion time of the always-on scheme: the binding quantity is
/// each cell's load budget, max_i sum_j b_ij d_ij / (l_i W B).
inline double all_on_completion_time(const NetworkInstance& net) {
  const Cluster full = Cluster::full(net.cell_count);
  double completion = 0;
  for (int i = 0; i < net.cell_count; ++i) {
    double cell_time = 0;
    for (int j : net.users_of_cell[i]) cell_time += net.demand[j] / vertex_rate(net, full, i, j);
    completion = std::max(completion, cell_time);
  }
  return completion;
}

/// All BSs transmit until every demand is met: column generation restricted
/// to the single full cluster. Energy is deadline-independent when feasible.
inline SolveReport all_on(const NetworkInstance& net) {
  const Cluster full = Cluster::full(net.cell_count);
  const double completion = all_on_completion_time(net);
  const double power = cluster_power(net, full);
  if (completion > net.deadline + kFeasEps) {
    SolveReport rep;
    rep.algorithm = "allon";
    rep.termination = Termination::Infeasible;
    rep.energy = power * completion;  // diagnostic
    return rep;
  }
  std::vector<Column> columns;
  for (int j = 0; j < net.user_count(); ++j) {
    std::vector<int> served(net.cell_count);
    for (int c = 0; c < net.cell_count; ++c)
      served[c] = (c == net.cell_of_user[j]) ? j : net.users_of_cell[c].front();
    add_column(columns, make_column(net, full, served));
  }
  VertexRateCache cache;
  auto price = [&](const DualPrices& duals, bool phase1) {
    return price_cluster(net, full, duals, {64, phase1, &cache});
  };
  const auto cg =
      detail::run_column_generation(net, std::move(columns), price, {kReducedCostEps, 10000, "allon"});
  SolveReport rep = detail::report_from("allon", cg);
  if (!rep.feasible()) rep.energy = power * completion;
  return rep;
}

struct BoundOptions {
  double eps_rc = kReducedCostEps;
  int max_rounds = 10000;
};

/// Lower/upper certificates and the repair heuristic from one
/// local-enumeration pass.
struct BoundReport {
  MPolicy policy;
  double e_le_off = std::numeric_limits<double>::infinity();
  double e_le_on = std::numeric_limits<double>::infinity();
  double e_near = std::numeric_limits<double>::infinity();
  bool off_feasible = false;
  bool on_feasible = false;
  SolveReport near_report;
  int rounds_off = 0;
  int rounds_on = 0;

  /// (E_LE-on - E_LE-off) / E_LE-off; NaN while either side is infeasible.
  double gap() const {
    if (!off_feasible || !on_feasible) return std::numeric_limits<double>::quiet_NaN();
    return (e_le_on - e_le_off) / e_le_off;
  }
};

namespace detail {

inline CgOutcome run_le(const NetworkInstance& net, const ScenarioTable& table, LeMode mode,
                        const BoundOptions& opts) {
  std::vector<Column> columns =
      initial_columns(net, InitialColumns::SingletonsAndFull, table.coeff_fn(mode));
  auto price = [&](const DualPrices& duals, bool phase1) {
    const LocalPricingResult res = solve_pricing_local(net, table, duals, mode, {phase1});
    return PricedColumn{res.column, res.reduced_cost};
  };
  return run_column_generation(net, std::move(columns), price,
                               {opts.eps_rc, opts.max_rounds, mode == LeMode::Off ? "le-off" : "le-on"});
}

/// NEAR steps 2-3: keep the LE-on activation set, swap each pessimistic rate
/// for the exact vertex rate of the same served user, re-solve the master over
/// exactly those columns. The LE-on durations stay feasible, so this can
/// only improve the LE-on energy.
inline SolveReport near_from(const NetworkInstance& net, const CgOutcome& on_run) {
  SolveReport rep;
  rep.algorithm = "near";
  if (on_run.termination != Termination::Converged) {
    rep.termination = on_run.termination;
    rep.iterations = on_run.rounds;
    return rep;
  }
  std::vector<Column> repaired;
  for (std::size_t c = 0; c < on_run.state.columns.size(); ++c) {
    if (on_run.state.duration[c] <= 0) continue;
    const Column& col = on_run.state.columns[c];
    std::vector<int> served;
    served.reserve(col.served.size());
    for (const auto& [cell, j] : col.served) {
      (void)cell;
      served.push_back(j);
    }
    add_column(repaired, make_column(net, col.cluster, served));
  }
  MasterState st = solve_master(net, repaired);
  if (st.status != lp::Status::Optimal)
    throw std::runtime_error("near: repaired master must stay feasible");
  rep.termination = Termination::Converged;
  rep.iterations = on_run.rounds + 1;
  rep.schedule = schedule_from(st);
  rep.energy = rep.schedule.total_energy;
  return rep;
}

}  // namespace detail

/// BOUND: column generation with LE-off pricing for the lower bound and
/// LE-on for the upper bound, plus NEAR. LE-off infeasibility implies true
/// infeasibility; LE-on may be infeasible even when the instance is not.
inline BoundReport bound(const NetworkInstance& net, const MPolicy& policy,
                         const BoundOptions& opts = {}) {
  const NeighborSets nbrs = select_neighbors(net, policy);
  const ScenarioTable table = build_scenarios(net, nbrs);
  BoundReport rep;
  rep.policy = policy;

  const auto off = detail::run_le(net, table, LeMode::Off, opts);
  rep.rounds_off = off.rounds;
  if (off.termination == Termination::Converged) {
    rep.off_feasible = true;
    rep.e_le_off = off.state.objective;
  }
  const auto on = detail::run_le(net, table, LeMode::On, opts);
  rep.rounds_on = on.rounds;
  if (on.termination == Termination::Converged) {
    rep.on_feasible = true;
    rep.e_le_on = on.state.objective;
  }
  rep.near_report = detail::near_from(net, on);
  if (rep.near_report.feasible()) rep.e_near = rep.near_report.energy;
  return rep;
}

/// The repair heuristic alone: LE-on run plus exact-rate resolution.
inline SolveReport near(const NetworkInstance& net, const MPolicy& policy,
                        const BoundOptions& opts = {}) {
  const NeighborSets nbrs = select_neighbors(net, policy);
  const ScenarioTable table = build_scenarios(net, nbrs);
  const auto on = detail::run_le(net, table, LeMode::On, opts);
  return detail::near_from(net, on);
}

}  // namespace cellsched

#endif  // CELLSCHED_ALGORITHMS_HPP
