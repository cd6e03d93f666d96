#include <catch2/catch.hpp>

#include "cellsched/master.hpp"
#include "cellsched/oracle.hpp"
#include "cellsched/pricing_exact.hpp"
#include "test_util.hpp"

using namespace cellsched;
using testutil::random_instance;
using testutil::unit_instance;

TEST_CASE("build_master lays out the LP for one singleton column") {
  const NetworkInstance net = unit_instance(1.0, 2.0);
  const int served[] = {0};
  const std::vector<Column> cols = {make_column(net, Cluster::single(0), served)};
  const lp::Problem p = build_master(net, cols);
  REQUIRE(p.rows == 2);
  REQUIRE(p.cols == 1);
  CHECK(p.cost[0] == cols[0].power);
  CHECK(p.at(0, 0) == cols[0].rate[0]);
  CHECK(p.at(1, 0) == 1.0);
  CHECK(p.rel[0] == lp::Relation::Ge);
  CHECK(p.rhs[0] == 1.0);
  CHECK(p.rel[1] == lp::Relation::Le);
  CHECK(p.rhs[1] == 2.0);
}

TEST_CASE("columns of one cluster share the cluster cost") {
  NetworkInstance net;
  net.cell_count = 1;
  net.cell_of_user = {0, 0};
  net.gain = {1.0, 2.0};
  net.tx_power_per_ru = {1.0};
  net.circuit_power = 1.0;
  net.ru_count = 1;
  net.ru_bandwidth = 1.0;
  net.noise = 1.0;
  net.load = {1.0};
  net.demand = {1.0, 1.0};
  net.deadline = 4.0;
  net.finalize();
  const int s0[] = {0};
  const int s1[] = {1};
  const std::vector<Column> cols = {make_column(net, Cluster::single(0), s0),
                                    make_column(net, Cluster::single(0), s1)};
  const lp::Problem p = build_master(net, cols);
  CHECK(p.cost[0] == p.cost[1]);
}

TEST_CASE("build_master matches the oracle's full-problem sub-block") {
  SplitMix64 rng(11);
  const NetworkInstance net = random_instance(rng, 2, 1, 2);
  const oracle::FullProblem full = oracle::build_full_problem(net);
  const lp::Problem sub = build_master(net, full.columns);
  CHECK(sub.a == full.problem.a);
  CHECK(sub.cost == full.problem.cost);
  CHECK(sub.rhs == full.problem.rhs);
}

TEST_CASE("solve_master on the unit toy") {
  // d = 1, rate = 1, T = 2, p = 30: x = 1, 30 J, pi = 30, lambda = 0
  NetworkInstance net = unit_instance(1.0, 2.0);
  net.circuit_power = 5.0;
  net.ru_count = 25;
  net.tx_power_per_ru = {1.0};
  net.ru_bandwidth = 1.0 / 25.0;  // keeps the vertex rate at 1
  net.finalize();
  const int served[] = {0};
  std::vector<Column> cols = {make_column(net, Cluster::single(0), served)};
  REQUIRE(cols[0].rate[0] == Approx(1.0));
  REQUIRE(cols[0].power == Approx(30.0));
  const MasterState st = solve_master(net, cols);
  REQUIRE(st.status == lp::Status::Optimal);
  CHECK(st.duration[0] == Approx(1.0));
  CHECK(st.objective == Approx(30.0));
  CHECK(st.duals.pi[0] == Approx(30.0));
  CHECK(st.duals.lambda == Approx(0.0).margin(1e-12));
}

TEST_CASE("solve_master reports infeasible when demand cannot fit") {
  const NetworkInstance net = unit_instance(10.0, 2.0);  // needs 10 s at rate 1
  const int served[] = {0};
  const std::vector<Column> cols = {make_column(net, Cluster::single(0), served)};
  CHECK(solve_master(net, cols).status == lp::Status::Infeasible);
}

TEST_CASE("feasibility master measures the shortfall") {
  const NetworkInstance net = unit_instance(10.0, 2.0);
  const int served[] = {0};
  const std::vector<Column> cols = {make_column(net, Cluster::single(0), served)};
  const MasterState st = solve_master_feasibility(net, cols);
  REQUIRE(st.status == lp::Status::Optimal);
  CHECK(st.shortfall_bits == Approx(8.0));  // 10 demanded, at most 2 served
}

TEST_CASE("duplicate columns are rejected") {
  const NetworkInstance net = unit_instance();
  const int served[] = {0};
  std::vector<Column> pool;
  CHECK(add_column(pool, make_column(net, Cluster::single(0), served)));
  CHECK_FALSE(add_column(pool, make_column(net, Cluster::single(0), served)));
  CHECK(pool.size() == 1);
}

TEST_CASE("held columns price out nonnegative at the master optimum") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkInstance net = random_instance(rng, 3, 1, 2, 50.0);
    const std::vector<Column> cols = initial_columns(net, InitialColumns::SingletonsAndFull);
    const MasterState st = solve_master(net, cols);
    REQUIRE(st.status == lp::Status::Optimal);
    for (const Column& c : st.columns) {
      double omega = 0;
      for (const auto& [cell, j] : c.served) {
        (void)cell;
        omega += st.duals.pi[j] * c.rate[j];
      }
      CHECK(c.power - omega - st.duals.lambda >= -1e-9 * std::max(1.0, c.power));
    }
    // basic solutions activate at most J + 1 columns
    int positive = 0;
    for (double d : st.duration)
      if (d > 0) ++positive;
    CHECK(positive <= net.user_count() + 1);
  }
}

TEST_CASE("adding a negative reduced cost column improves the objective") {
  SplitMix64 rng(13);
  int improved = 0;
  for (int trial = 0; trial < 100 && improved < 3; ++trial) {
    NetworkInstance net = random_instance(rng, 3, 2, 3, 1.0);
    double tdma_time = 0;
    for (int j = 0; j < net.user_count(); ++j) {
      const int i = net.cell_of_user[j];
      tdma_time += net.demand[j] / vertex_rate(net, Cluster::single(i), i, j);
    }
    net.deadline = 0.8 * tdma_time;  // tight enough that clustering pays
    std::vector<Column> cols = initial_columns(net, InitialColumns::SingletonsAndFull);
    const MasterState st = solve_master(net, cols);
    if (st.status != lp::Status::Optimal) continue;
    const PricedColumn best = price_all(net, st.duals);
    if (best.reduced_cost < -1e-7) {
      REQUIRE(add_column(cols, best.column));
      const MasterState st2 = solve_master(net, cols);
      REQUIRE(st2.status == lp::Status::Optimal);
      CHECK(st2.objective <= st.objective + 1e-9);
      ++improved;
    }
  }
  CHECK(improved >= 3);  // the scenario must actually occur in the sample
}

TEST_CASE("initial column presets") {
  SplitMix64 rng(14);
  const NetworkInstance net = random_instance(rng, 3, 2, 2);
  const auto def = initial_columns(net, InitialColumns::SingletonsAndFull);
  int singles = 0, fulls = 0;
  for (const Column& c : def) (c.cluster.size() == 1 ? singles : fulls)++;
  CHECK(singles == 6);
  CHECK(fulls == 4);  // 6 users: the 3 lowest-index ones collapse into one column
  const auto pairs = initial_columns(net, InitialColumns::PairsComplete);
  CHECK(pairs.size() == 3 * 4);  // 3 pairs, 2x2 vertex choices each
  for (const Column& c : pairs) CHECK(c.cluster.size() == 2);
}
