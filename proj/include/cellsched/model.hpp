#ifndef CELLSCHED_MODEL_HPP
#define CELLSCHED_MODEL_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellsched {

/// Absolute tolerance for demand/time feasibility checks (natural units).
inline constexpr double kFeasEps = 1e-6;
/// Absolute tolerance on reduced cost for column-generation termination.
inline constexpr double kReducedCostEps = 1e-7;

/// A set of simultaneously transmitting cells, encoded as a bitmask.
/// Cell ids must be < 64.
class Cluster {
 public:
  constexpr Cluster() = default;
  explicit constexpr Cluster(std::uint64_t bits) : bits_(bits) {}

  static constexpr Cluster single(int cell) { return Cluster(std::uint64_t{1} << cell); }
  static constexpr Cluster full(int cell_count) {
    return cell_count >= 64 ? Cluster(~std::uint64_t{0})
                            : Cluster((std::uint64_t{1} << cell_count) - 1);
  }
  static Cluster of(std::initializer_list<int> cells) {
    std::uint64_t b = 0;
    for (int c : cells) b |= std::uint64_t{1} << c;
    return Cluster(b);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int cell) const { return (bits_ >> cell) & 1u; }
  constexpr bool subset_of(Cluster o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr Cluster with(int cell) const { return Cluster(bits_ | (std::uint64_t{1} << cell)); }
  constexpr Cluster without(int cell) const { return Cluster(bits_ & ~(std::uint64_t{1} << cell)); }

  template <typename F>
  void for_each(F&& f) const {
    std::uint64_t b = bits_;
    while (b) {
      f(std::countr_zero(b));
      b &= b - 1;
    }
  }
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for_each([&](int c) { out.push_back(c); });
    return out;
  }

  friend constexpr bool operator==(Cluster a, Cluster b) = default;
  friend constexpr bool operator<(Cluster a, Cluster b) { return a.bits_ < b.bits_; }

 private:
  std::uint64_t bits_ = 0;
};

/// Optional generator provenance carried along with an instance. Cell
/// positions are required by the "neighbor" M policy; the rest is
/// bookkeeping written by the generator.
struct InstanceMeta {
  std::string layout;            // "single" | "hex7" | "hex19" | "custom"
  double radius_m = 0;
  double carrier_mhz = 0;
  double bs_height_m = 0;
  double user_height_m = 0;
  double env_correction_db = 0;
  double shadowing_sigma_db = 0;
  std::uint64_t seed = 0;
  std::vector<double> cell_x;    // per cell, meters
  std::vector<double> cell_y;
};

/// Full problem input: cells, user partition, link gains, powers, loads,
/// demands and the scheduling deadline.
struct NetworkInstance {
  int cell_count = 0;
  std::vector<int> cell_of_user;                // size J
  std::vector<std::vector<int>> users_of_cell;  // derived by finalize()
  std::vector<double> gain;                     // cell-major, gain[k*J + j]
  std::vector<double> tx_power_per_ru;          // p_i, watts
  double circuit_power = 0;                     // p0, watts
  int ru_count = 0;                             // W
  double ru_bandwidth = 0;                      // B, hertz
  double noise = 0;                             // eta, watts per RU
  std::vector<double> load;                     // l_i in (0, 1]
  std::vector<double> demand;                   // d_j, bits
  double deadline = 0;                          // T, seconds
  std::optional<InstanceMeta> meta;

  int user_count() const { return static_cast<int>(cell_of_user.size()); }
  double g(int cell, int user) const {
    return gain[static_cast<std::size_t>(cell) * cell_of_user.size() + user];
  }
  double& g(int cell, int user) {
    return gain[static_cast<std::size_t>(cell) * cell_of_user.size() + user];
  }
  /// Total bandwidth W*B of a cell, hertz.
  double wb() const { return ru_count * ru_bandwidth; }
  /// Power of cell i while active: p0 + l_i * W * p_i.
  double cell_power(int i) const {
    return circuit_power + load[i] * ru_count * tx_power_per_ru[i];
  }

  /// Builds users_of_cell from cell_of_user and checks all invariants.
  /// Throws std::invalid_argument on violation.
  void finalize() {
    const int users = user_count();
    if (cell_count <= 0 || cell_count > 64)
      throw std::invalid_argument("cell_count must be in [1, 64]");
    if (users <= 0) throw std::invalid_argument("instance has no users");
    if (static_cast<int>(tx_power_per_ru.size()) != cell_count ||
        static_cast<int>(load.size()) != cell_count)
      throw std::invalid_argument("per-cell array size mismatch");
    if (static_cast<int>(demand.size()) != users)
      throw std::invalid_argument("demand size mismatch");
    if (gain.size() != static_cast<std::size_t>(cell_count) * users)
      throw std::invalid_argument("gain matrix size mismatch");
    if (!(circuit_power > 0) || !(noise > 0) || !(deadline > 0) ||
        ru_count <= 0 || !(ru_bandwidth > 0))
      throw std::invalid_argument("p0, noise, deadline, W, B must be positive");
    users_of_cell.assign(cell_count, {});
    for (int j = 0; j < users; ++j) {
      const int c = cell_of_user[j];
      if (c < 0 || c >= cell_count) throw std::invalid_argument("user assigned to unknown cell");
      users_of_cell[c].push_back(j);
    }
    for (int i = 0; i < cell_count; ++i) {
      if (users_of_cell[i].empty())
        throw std::invalid_argument("cell " + std::to_string(i) + " has no users");
      if (!(tx_power_per_ru[i] > 0)) throw std::invalid_argument("tx power must be positive");
      if (!(load[i] > 0) || load[i] > 1.0) throw std::invalid_argument("load must be in (0, 1]");
    }
    for (int j = 0; j < users; ++j) {
      if (!(demand[j] > 0)) throw std::invalid_argument("demand must be positive");
      if (!(g(cell_of_user[j], j) > 0))
        throw std::invalid_argument("serving gain must be positive");
      for (int k = 0; k < cell_count; ++k)
        if (g(k, j) < 0) throw std::invalid_argument("gains must be nonnegative");
    }
  }
};

/// Coupling coefficient used when building a column's rates. The exact model
/// evaluates b_ij^s; the local-enumeration table substitutes beta values.
using CoeffFn =
    std::function<double(const NetworkInstance&, Cluster, int /*cell*/, int /*user*/)>;

/// b_ij^s = 1 / log2(1 + p_i g_ij / (sum_{k in s, k != i} p_k g_kj l_k + eta)).
inline double coupling_coeff(const NetworkInstance& net, Cluster s, int cell, int user) {
  if (!s.contains(cell)) throw std::domain_error("cell not in cluster");
  if (net.cell_of_user[user] != cell) throw std::domain_error("user not in cell");
  double denom = net.noise;
  s.for_each([&](int k) {
    if (k != cell) denom += net.tx_power_per_ru[k] * net.g(k, user) * net.load[k];
  });
  const double sinr = net.tx_power_per_ru[cell] * net.g(cell, user) / denom;
  return 1.0 / std::log2(1.0 + sinr);
}

inline CoeffFn exact_coeff() {
  return [](const NetworkInstance& net, Cluster s, int cell, int user) {
    return coupling_coeff(net, s, cell, user);
  };
}

/// p_s = sum over member cells of (p0 + l_i W p_i).
inline double cluster_power(const NetworkInstance& net, Cluster s) {
  if (s.empty()) throw std::domain_error("empty cluster");
  double p = 0;
  s.for_each([&](int i) { p += net.cell_power(i); });
  return p;
}

/// Rate of the simplex vertex where user j takes cell i's whole load budget:
/// l_i * W * B * log2(1 + SINR_ij) = l_i * W * B / b_ij^s, in bits/second.
inline double vertex_rate(const NetworkInstance& net, Cluster s, int cell, int user) {
  return net.load[cell] * net.wb() / coupling_coeff(net, s, cell, user);
}

/// A cluster paired with one vertex rate vector: exactly one served user per
/// member cell. The unit the master LP prices and schedules.
struct Column {
  Cluster cluster;
  std::vector<std::pair<int, int>> served;  // (cell, user), ascending cell
  std::vector<double> rate;                 // size J, zero except served users
  double power = 0;                         // p_s, watts

  int served_user(int cell) const {
    for (const auto& [c, j] : served)
      if (c == cell) return j;
    return -1;
  }
  bool same_vertex(const Column& o) const {
    return cluster == o.cluster && served == o.served;
  }
};

/// Builds a column for `cluster` serving `users` (one per member cell, in
/// ascending cell order) with rates derived from `coeff`.
inline Column make_column_with(const NetworkInstance& net, Cluster cluster,
                               std::span<const int> users, const CoeffFn& coeff) {
  if (cluster.empty()) throw std::domain_error("empty cluster");
  if (static_cast<int>(users.size()) != cluster.size())
    throw std::domain_error("one served user per member cell required");
  Column col;
  col.cluster = cluster;
  col.rate.assign(net.user_count(), 0.0);
  col.power = cluster_power(net, cluster);
  int idx = 0;
  cluster.for_each([&](int cell) {
    const int j = users[idx++];
    if (net.cell_of_user[j] != cell) throw std::domain_error("served user not in member cell");
    col.served.emplace_back(cell, j);
    col.rate[j] = net.load[cell] * net.wb() / coeff(net, cluster, cell, j);
  });
  return col;
}

inline Column make_column(const NetworkInstance& net, Cluster cluster,
                          std::span<const int> users) {
  return make_column_with(net, cluster, users, exact_coeff());
}

struct ScheduleEntry {
  Column column;
  double duration = 0;  // seconds
};

/// Solver output: activations with durations and the implied energy.
struct Schedule {
  std::vector<ScheduleEntry> entries;
  double total_energy = 0;  // joules

  double total_time() const {
    double t = 0;
    for (const auto& e : entries) t += e.duration;
    return t;
  }
};

/// Result of re-checking a schedule against exact coupling coefficients.
struct FeasibilityReport {
  bool feasible = false;
  bool demand_met = false;
  bool within_deadline = false;
  double time_used = 0;
  std::vector<double> served_bits;   // per user
  std::vector<double> slack;         // served - demand, per user
  double worst_shortfall = 0;        // max(demand - served) over users, >= 0
  double total_energy = 0;           // recomputed from powers and durations
};

/// Recomputes every column's rates from exact coupling coefficients and
/// checks demand coverage and the time budget. Violations are reported, not
/// thrown.
inline FeasibilityReport validate_schedule(const NetworkInstance& net, const Schedule& sched) {
  FeasibilityReport rep;
  const int users = net.user_count();
  rep.served_bits.assign(users, 0.0);
  for (const auto& entry : sched.entries) {
    const Column& col = entry.column;
    for (const auto& [cell, j] : col.served) {
      rep.served_bits[j] += entry.duration * vertex_rate(net, col.cluster, cell, j);
    }
    rep.time_used += entry.duration;
    rep.total_energy += entry.duration * cluster_power(net, col.cluster);
  }
  rep.slack.resize(users);
  for (int j = 0; j < users; ++j) {
    rep.slack[j] = rep.served_bits[j] - net.demand[j];
    rep.worst_shortfall = std::max(rep.worst_shortfall, -rep.slack[j]);
  }
  rep.demand_met = rep.worst_shortfall <= kFeasEps;
  rep.within_deadline = rep.time_used <= net.deadline + kFeasEps;
  rep.feasible = rep.demand_met && rep.within_deadline;
  return rep;
}

/// A cluster activation with a (not necessarily vertex) rate vector.
struct Activation {
  Cluster cluster;
  std::vector<double> rate;  // size J
  double duration = 0;
  double power = 0;
};

/// Convex recombination of same-cluster columns: the duration-weighted
/// average rate vector over the total duration serves identical bits.
inline Activation aggregate_columns(std::span<const ScheduleEntry> entries) {
  if (entries.empty()) throw std::domain_error("nothing to aggregate");
  const Cluster cluster = entries.front().column.cluster;
  double total = 0;
  for (const auto& e : entries) {
    if (!(e.column.cluster == cluster)) throw std::domain_error("mixed clusters");
    total += e.duration;
  }
  if (!(total > 0)) throw std::domain_error("total duration must be positive");
  Activation agg;
  agg.cluster = cluster;
  agg.duration = total;
  agg.power = entries.front().column.power;
  agg.rate.assign(entries.front().column.rate.size(), 0.0);
  for (const auto& e : entries) {
    const double w = e.duration / total;
    for (std::size_t j = 0; j < agg.rate.size(); ++j) agg.rate[j] += w * e.column.rate[j];
  }
  return agg;
}

}  // namespace cellsched

#endif  // CELLSCHED_MODEL_HPP
