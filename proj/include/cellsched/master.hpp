#ifndef CELLSCHED_MASTER_HPP
#define CELLSCHED_MASTER_HPP

#include <span>
#include <vector>

#include "cellsched/lp.hpp"
#include "cellsched/model.hpp"

namespace cellsched {

/// Dual prices of a master optimum: pi per user (>= 0), lambda for the
/// time row (<= 0).
struct DualPrices {
  std::vector<double> pi;
  double lambda = 0;
};

struct MasterState {
  std::vector<Column> columns;
  std::vector<double> duration;   // per column, seconds
  DualPrices duals;
  double objective = 0;           // joules
  lp::Status status = lp::Status::Infeasible;
  std::vector<char> basic;        // per column
  double shortfall_bits = 0;      // set by the feasibility variant only
};

/// Assembles the restricted master problem: one demand row per user with
/// the columns' rates as coefficients, one sum-of-durations row against the
/// deadline, cluster powers as costs. Unscaled; the solve path works on a
/// row-scaled copy.
inline lp::Problem build_master(const NetworkInstance& net, std::span<const Column> columns) {
  if (columns.empty()) throw std::invalid_argument("master: no columns");
  const int users = net.user_count();
  const int n = static_cast<int>(columns.size());
  lp::Problem p;
  p.resize(users + 1, n);
  for (int c = 0; c < n; ++c) {
    p.cost[c] = columns[c].power;
    for (const auto& [cell, j] : columns[c].served) {
      (void)cell;
      p.at(j, c) = columns[c].rate[j];
    }
    p.at(users, c) = 1.0;
  }
  for (int j = 0; j < users; ++j) {
    p.rel[j] = lp::Relation::Ge;
    p.rhs[j] = net.demand[j];
  }
  p.rel[users] = lp::Relation::Le;
  p.rhs[users] = net.deadline;
  return p;
}

namespace detail {

/// Shared master solve. With `with_shortfall`, J extra unit-cost variables
/// absorb unmet demand so the LP is always feasible; the objective is then
/// the total shortfall instead of energy. User rows are scaled by 1/(W*B)
/// to keep the matrix well conditioned; duals are mapped back.
inline MasterState solve_master_impl(const NetworkInstance& net,
                                     const std::vector<Column>& columns,
                                     bool with_shortfall) {
  const int users = net.user_count();
  const int n = static_cast<int>(columns.size());
  const double wb = net.wb();
  lp::Problem p;
  p.resize(users + 1, with_shortfall ? n + users : n);
  for (int c = 0; c < n; ++c) {
    p.cost[c] = with_shortfall ? 0.0 : columns[c].power;
    for (const auto& [cell, j] : columns[c].served) {
      (void)cell;
      p.at(j, c) = columns[c].rate[j] / wb;
    }
    p.at(users, c) = 1.0;
  }
  if (with_shortfall) {
    for (int j = 0; j < users; ++j) {
      p.cost[n + j] = 1.0;
      p.at(j, n + j) = 1.0;
    }
  }
  for (int j = 0; j < users; ++j) {
    p.rel[j] = lp::Relation::Ge;
    p.rhs[j] = net.demand[j] / wb;
  }
  p.rel[users] = lp::Relation::Le;
  p.rhs[users] = net.deadline;

  const lp::Solution sol = lp::solve(p);
  MasterState st;
  st.columns = columns;
  st.status = sol.status;
  if (sol.status != lp::Status::Optimal) return st;
  st.duration.assign(sol.x.begin(), sol.x.begin() + n);
  st.basic.assign(sol.basic.begin(), sol.basic.begin() + n);
  st.duals.pi.resize(users);
  for (int j = 0; j < users; ++j) st.duals.pi[j] = sol.dual[j] / wb;
  st.duals.lambda = sol.dual[users];
  if (with_shortfall) {
    st.shortfall_bits = sol.objective * wb;
    double energy = 0;
    for (int c = 0; c < n; ++c) energy += columns[c].power * st.duration[c];
    st.objective = energy;
  } else {
    st.objective = sol.objective;
  }
  return st;
}

}  // namespace detail

/// Solves the restricted master over the given columns. Unbounded cannot occur (costs > 0,
/// x >= 0) and is surfaced as an internal fault.
inline MasterState solve_master(const NetworkInstance& net, const std::vector<Column>& columns) {
  MasterState st = detail::solve_master_impl(net, columns, false);
  if (st.status == lp::Status::Unbounded)
    throw std::runtime_error("master: unbounded master LP (internal fault)");
  return st;
}

/// Feasibility master: minimizes total unmet demand over the held columns.
/// Always optimal; shortfall_bits == 0 means the plain master is feasible.
inline MasterState solve_master_feasibility(const NetworkInstance& net,
                                            const std::vector<Column>& columns) {
  MasterState st = detail::solve_master_impl(net, columns, true);
  if (st.status != lp::Status::Optimal)
    throw std::runtime_error("master: feasibility LP must be solvable");
  return st;
}

/// Duplicate guard keyed on (cluster bitmask, served users). Returns false
/// and leaves the pool unchanged when an identical vertex is already held.
inline bool add_column(std::vector<Column>& pool, Column col) {
  for (const Column& held : pool)
    if (held.same_vertex(col)) return false;
  pool.push_back(std::move(col));
  return true;
}

enum class InitialColumns {
  SingletonsAndFull,  // TDMA columns plus one full-cluster column per user
  PairsComplete,      // every size-two cluster with its complete vertex set
};

/// Builds the starting column pool under the given coefficient model (exact
/// coefficients for OCS, beta tables for the LE runs).
inline std::vector<Column> initial_columns(const NetworkInstance& net, InitialColumns preset,
                                           const CoeffFn& coeff = exact_coeff()) {
  std::vector<Column> pool;
  const int cells = net.cell_count;
  if (preset == InitialColumns::PairsComplete && cells >= 2) {
    for (int i = 0; i < cells; ++i) {
      for (int k = i + 1; k < cells; ++k) {
        const Cluster pair = Cluster::of({i, k});
        for (int ji : net.users_of_cell[i]) {
          for (int jk : net.users_of_cell[k]) {
            const int served[] = {ji, jk};
            add_column(pool, make_column_with(net, pair, served, coeff));
          }
        }
      }
    }
    return pool;
  }
  for (int i = 0; i < cells; ++i) {
    for (int j : net.users_of_cell[i]) {
      const int served[] = {j};
      add_column(pool, make_column_with(net, Cluster::single(i), served, coeff));
    }
  }
  if (cells >= 2) {
    const Cluster full = Cluster::full(cells);
    for (int j = 0; j < net.user_count(); ++j) {
      std::vector<int> served(cells);
      for (int c = 0; c < cells; ++c)
        served[c] = (c == net.cell_of_user[j]) ? j : net.users_of_cell[c].front();
      add_column(pool, make_column_with(net, full, served, coeff));
    }
  }
  return pool;
}

}  // namespace cellsched

#endif  // CELLSCHED_MASTER_HPP
