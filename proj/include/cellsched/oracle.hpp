#ifndef CELLSCHED_ORACLE_HPP
#define CELLSCHED_ORACLE_HPP

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "cellsched/lp.hpp"
#include "cellsched/model.hpp"
#include "cellsched/pricing_local.hpp"

namespace cellsched::oracle {

/// Every way of picking one served user per member cell, member cells in
/// ascending order, last cell varying fastest.
inline std::vector<std::vector<int>> served_combinations(const NetworkInstance& net, Cluster s) {
  const std::vector<int> cells = s.members();
  std::vector<std::vector<int>> out;
  std::vector<std::size_t> odo(cells.size(), 0);
  while (true) {
    std::vector<int> pick(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      pick[c] = net.users_of_cell[cells[c]][odo[c]];
    out.push_back(std::move(pick));
    int c = static_cast<int>(cells.size()) - 1;
    while (c >= 0) {
      if (++odo[c] < net.users_of_cell[cells[c]].size()) break;
      odo[c--] = 0;
    }
    if (c < 0) break;
  }
  return out;
}

inline std::size_t full_problem_column_count(const NetworkInstance& net) {
  std::size_t total = 0;
  const std::uint64_t end = std::uint64_t{1} << net.cell_count;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    std::size_t combos = 1;
    Cluster(mask).for_each([&](int i) { combos *= net.users_of_cell[i].size(); });
    total += combos;
  }
  return total;
}

struct FullProblem {
  std::vector<Column> columns;  // every (cluster, vertex) pair
  lp::Problem problem;          // unscaled, rows = J demand rows + time row
};

/// The complete formulation: all clusters in increasing bitmask order, each
/// with its complete vertex set. Guarded to one million columns.
inline FullProblem build_full_problem(const NetworkInstance& net) {
  if (full_problem_column_count(net) > 1000000)
    throw std::length_error("full enumeration exceeds the brute-force size guard");
  FullProblem out;
  const std::uint64_t end = std::uint64_t{1} << net.cell_count;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    const Cluster s(mask);
    for (const auto& pick : served_combinations(net, s))
      out.columns.push_back(make_column(net, s, pick));
  }
  const int users = net.user_count();
  const int n = static_cast<int>(out.columns.size());
  out.problem.resize(users + 1, n);
  for (int c = 0; c < n; ++c) {
    out.problem.cost[c] = out.columns[c].power;
    for (const auto& [cell, j] : out.columns[c].served) {
      (void)cell;
      out.problem.at(j, c) = out.columns[c].rate[j];
    }
    out.problem.at(users, c) = 1.0;
  }
  for (int j = 0; j < users; ++j) {
    out.problem.rel[j] = lp::Relation::Ge;
    out.problem.rhs[j] = net.demand[j];
  }
  out.problem.rel[users] = lp::Relation::Le;
  out.problem.rhs[users] = net.deadline;
  return out;
}

struct BruteForceResult {
  bool feasible = false;
  double energy = std::numeric_limits<double>::infinity();
  Schedule schedule;
};

/// Global optimum by construction: solves the complete formulation directly.
/// Never used on the main solve path.
inline BruteForceResult brute_force_optimum(const NetworkInstance& net) {
  FullProblem full = build_full_problem(net);
  // row-scaled copy for conditioning, same scheme as the master solve
  lp::Problem scaled = full.problem;
  const double wb = net.wb();
  const int users = net.user_count();
  for (int j = 0; j < users; ++j) {
    for (int c = 0; c < scaled.cols; ++c) scaled.at(j, c) /= wb;
    scaled.rhs[j] /= wb;
  }
  const lp::Solution sol = lp::solve(scaled);
  BruteForceResult out;
  if (sol.status != lp::Status::Optimal) return out;
  out.feasible = true;
  for (int c = 0; c < scaled.cols; ++c) {
    if (sol.x[c] > 0) {
      out.schedule.entries.push_back({full.columns[c], sol.x[c]});
      out.schedule.total_energy += full.columns[c].power * sol.x[c];
    }
  }
  out.energy = out.schedule.total_energy;
  return out;
}

struct LocalPricingBrute {
  Cluster best;
  double objective = -std::numeric_limits<double>::infinity();
  double reduced_cost = 0;
};

/// Exhaustive local pricing: evaluates F(z) for every nonempty z. Exact maximum, ties
/// to the lowest bitmask.
inline LocalPricingBrute brute_force_local_pricing(const NetworkInstance& net,
                                                   const ScenarioTable& table,
                                                   const DualPrices& duals, LeMode mode,
                                                   bool phase1 = false) {
  if (net.cell_count > 20) throw std::length_error("local pricing brute force limited to 20 cells");
  LocalPricingBrute out;
  const std::uint64_t end = std::uint64_t{1} << net.cell_count;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    const Cluster z(mask);
    double f = 0;
    z.for_each([&](int i) {
      const unsigned e = table.scenario_of(i, z);
      double best = -std::numeric_limits<double>::infinity();
      for (int j : net.users_of_cell[i]) {
        const double rate = net.load[i] * net.wb() / table.beta(mode, i, e, j);
        best = std::max(best, duals.pi[j] * rate);
      }
      f += best - (phase1 ? 0.0 : net.cell_power(i));
    });
    if (f > out.objective) {
      out.objective = f;
      out.best = z;
    }
  }
  out.reduced_cost = -out.objective - duals.lambda;
  return out;
}

}  // namespace cellsched::oracle

#endif  // CELLSCHED_ORACLE_HPP
