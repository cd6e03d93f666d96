#include <catch2/catch.hpp>
#include <cmath>

#include "cellsched/model.hpp"
#include "cellsched/prng.hpp"
#include "test_util.hpp"

using namespace cellsched;
using testutil::random_instance;
using testutil::two_cell_unit;
using testutil::unit_instance;

TEST_CASE("coupling coefficient, singleton with unit parameters") {
  const NetworkInstance net = unit_instance();
  CHECK(coupling_coeff(net, Cluster::single(0), 0, 0) == 1.0);  // 1/log2(2)
}

TEST_CASE("coupling coefficient, two-cell cluster with unit gains") {
  const NetworkInstance net = two_cell_unit();
  const Cluster pair = Cluster::of({0, 1});
  // 1 / log2(1 + 1/(1+1)), evaluated independently
  CHECK(coupling_coeff(net, pair, 0, 0) == Approx(1.709511291351455).epsilon(1e-12));
  CHECK(coupling_coeff(net, pair, 1, 1) == Approx(1.709511291351455).epsilon(1e-12));
}

TEST_CASE("zero cross gains reduce to the singleton coefficient") {
  NetworkInstance net = two_cell_unit();
  net.g(1, 0) = 0.0;
  net.finalize();
  const Cluster pair = Cluster::of({0, 1});
  CHECK(coupling_coeff(net, pair, 0, 0) == coupling_coeff(net, Cluster::single(0), 0, 0));
}

TEST_CASE("coupling coefficient domain errors") {
  const NetworkInstance net = two_cell_unit();
  CHECK_THROWS_AS(coupling_coeff(net, Cluster::single(0), 1, 1), std::domain_error);
  CHECK_THROWS_AS(coupling_coeff(net, Cluster::of({0, 1}), 0, 1), std::domain_error);
}

TEST_CASE("cluster power") {
  NetworkInstance net;
  net.cell_count = 7;
  for (int i = 0; i < 7; ++i) {
    for (int u = 0; u < 1; ++u) net.cell_of_user.push_back(i);
  }
  net.gain.assign(7 * 7, 0.0);
  for (int j = 0; j < 7; ++j) net.g(j, j) = 1.0;
  net.tx_power_per_ru.assign(7, 1.0);
  net.circuit_power = 5.0;
  net.ru_count = 25;
  net.ru_bandwidth = 180e3;
  net.noise = 1e-9;
  net.load.assign(7, 1.0);
  net.demand.assign(7, 1.0);
  net.deadline = 1.0;
  net.finalize();

  CHECK(cluster_power(net, Cluster::single(0)) == 30.0);
  CHECK(cluster_power(net, Cluster::full(7)) == 210.0);
  net.load.assign(7, 0.5);
  CHECK(cluster_power(net, Cluster::single(0)) == 17.5);
  CHECK_THROWS_AS(cluster_power(net, Cluster()), std::domain_error);
}

TEST_CASE("vertex rates") {
  NetworkInstance net = unit_instance();
  CHECK(vertex_rate(net, Cluster::single(0), 0, 0) == 1.0);
  net.load = {0.5};
  CHECK(vertex_rate(net, Cluster::single(0), 0, 0) == 0.5);

  const NetworkInstance pair_net = two_cell_unit();
  const Cluster pair = Cluster::of({0, 1});
  CHECK(vertex_rate(pair_net, pair, 0, 0) == Approx(0.5849625007211562).epsilon(1e-12));
  // reciprocal relation with the coupling coefficient
  CHECK(vertex_rate(pair_net, pair, 0, 0) * coupling_coeff(pair_net, pair, 0, 0) ==
        Approx(1.0).epsilon(1e-12));
}

TEST_CASE("singleton vertex rate dominates any cluster's") {
  SplitMix64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkInstance net = random_instance(rng, 4, 1, 3);
    const Cluster full = Cluster::full(4);
    for (int i = 0; i < 4; ++i) {
      for (int j : net.users_of_cell[i]) {
        CHECK(vertex_rate(net, Cluster::single(i), i, j) >=
              vertex_rate(net, full, i, j) - 1e-12);
      }
    }
  }
}

TEST_CASE("coupling coefficient is monotone in cluster membership") {
  SplitMix64 rng(42);
  for (int trial = 0; trial < 50; ++trial) {
    const NetworkInstance net = random_instance(rng, 5, 1, 2);
    Cluster small = Cluster::single(0);
    Cluster big = small;
    for (int k = 1; k < 5; ++k)
      if (rng.uniform() < 0.6) big = big.with(k);
    for (int j : net.users_of_cell[0]) {
      CHECK(coupling_coeff(net, small, 0, j) <= coupling_coeff(net, big, 0, j) + 1e-12);
    }
  }
}

TEST_CASE("columns satisfy the per-cell load budget") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkInstance net = random_instance(rng, 4, 1, 3);
    Cluster s;
    for (int k = 0; k < 4; ++k)
      if (rng.uniform() < 0.5) s = s.with(k);
    if (s.empty()) s = Cluster::single(0);
    std::vector<int> served;
    s.for_each([&](int cell) {
      const auto& u = net.users_of_cell[cell];
      served.push_back(u[rng.uniform_int(0, static_cast<int>(u.size()) - 1)]);
    });
    const Column col = make_column(net, s, served);
    s.for_each([&](int cell) {
      double lhs = 0;
      for (int j : net.users_of_cell[cell])
        lhs += coupling_coeff(net, s, cell, j) * col.rate[j];
      const double rhs = net.load[cell] * net.wb();
      CHECK(lhs == Approx(rhs).epsilon(1e-9));
    });
    // power cached on the column matches the definition
    CHECK(col.power == Approx(cluster_power(net, s)).epsilon(1e-12));
  }
}

TEST_CASE("validate_schedule flags an empty schedule") {
  const NetworkInstance net = unit_instance();
  const FeasibilityReport rep = validate_schedule(net, Schedule{});
  CHECK_FALSE(rep.feasible);
  CHECK_FALSE(rep.demand_met);
  CHECK(rep.within_deadline);
  CHECK(rep.worst_shortfall == Approx(1.0));
}

TEST_CASE("validate_schedule accepts an exact service") {
  const NetworkInstance net = unit_instance(1.0, 2.0);
  const int served[] = {0};
  Schedule sched;
  sched.entries.push_back({make_column(net, Cluster::single(0), served), 1.0});
  sched.total_energy = 2.0;
  const FeasibilityReport rep = validate_schedule(net, sched);
  CHECK(rep.feasible);
  CHECK(rep.time_used == Approx(1.0));
  CHECK(rep.total_energy == Approx(2.0));
}

TEST_CASE("aggregate_columns identity") {
  const NetworkInstance net = unit_instance();
  const int served[] = {0};
  ScheduleEntry entry{make_column(net, Cluster::single(0), served), 2.0};
  const Activation agg = aggregate_columns(std::span(&entry, 1));
  CHECK(agg.duration == 2.0);
  CHECK(agg.rate[0] == entry.column.rate[0]);
}

TEST_CASE("aggregate_columns splits a two-user cell symmetrically") {
  NetworkInstance net;
  net.cell_count = 1;
  net.cell_of_user = {0, 0};
  net.gain = {1.0, 3.0};
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
  const std::vector<ScheduleEntry> entries = {
      {make_column(net, Cluster::single(0), s0), 1.0},
      {make_column(net, Cluster::single(0), s1), 1.0},
  };
  const Activation agg = aggregate_columns(entries);
  CHECK(agg.duration == 2.0);
  CHECK(agg.rate[0] == Approx(entries[0].column.rate[0] / 2));
  CHECK(agg.rate[1] == Approx(entries[1].column.rate[1] / 2));
}

TEST_CASE("aggregate_columns preserves served bits") {
  SplitMix64 rng(44);
  for (int trial = 0; trial < 40; ++trial) {
    const NetworkInstance net = random_instance(rng, 3, 1, 3);
    Cluster s;
    for (int k = 0; k < 3; ++k)
      if (rng.uniform() < 0.5) s = s.with(k);
    if (s.empty()) s = Cluster::single(rng.uniform_int(0, 2));
    const int count = rng.uniform_int(1, 5);
    std::vector<ScheduleEntry> entries;
    for (int c = 0; c < count; ++c) {
      std::vector<int> served;
      s.for_each([&](int cell) {
        const auto& u = net.users_of_cell[cell];
        served.push_back(u[rng.uniform_int(0, static_cast<int>(u.size()) - 1)]);
      });
      entries.push_back({make_column(net, s, served), rng.uniform(0.1, 2.0)});
    }
    const Activation agg = aggregate_columns(entries);
    for (int j = 0; j < net.user_count(); ++j) {
      double direct = 0;
      for (const auto& e : entries) direct += e.duration * e.column.rate[j];
      const double recombined = agg.duration * agg.rate[j];
      CHECK(recombined == Approx(direct).margin(1e-12 * std::max(1.0, direct)));
    }
  }
}

TEST_CASE("aggregate_columns rejects mixed clusters") {
  const NetworkInstance net = two_cell_unit();
  const int s0[] = {0};
  const int s1[] = {1};
  const std::vector<ScheduleEntry> entries = {
      {make_column(net, Cluster::single(0), s0), 1.0},
      {make_column(net, Cluster::single(1), s1), 1.0},
  };
  CHECK_THROWS_AS(aggregate_columns(entries), std::domain_error);
}

TEST_CASE("instance invariants are enforced") {
  NetworkInstance net = unit_instance();
  net.load = {1.5};
  CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
  net = unit_instance();
  net.demand = {0.0};
  CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
  net = unit_instance();
  net.cell_count = 2;  // cell 1 would have no users
  CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
  net = unit_instance();
  net.gain = {0.0};  // serving gain must be positive
  CHECK_THROWS_AS(net.finalize(), std::invalid_argument);
}

TEST_CASE("cluster bitmask basics") {
  const Cluster c = Cluster::of({1, 3, 5});
  CHECK(c.size() == 3);
  CHECK(c.contains(3));
  CHECK_FALSE(c.contains(0));
  CHECK(c.members() == std::vector<int>{1, 3, 5});
  CHECK(Cluster::single(2).subset_of(Cluster::of({1, 2})));
  CHECK(Cluster::full(3).bits() == 0b111);
}
