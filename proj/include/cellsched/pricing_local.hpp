#ifndef CELLSCHED_PRICING_LOCAL_HPP
#define CELLSCHED_PRICING_LOCAL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cellsched/master.hpp"
#include "cellsched/model.hpp"

namespace cellsched {

/// How many interferers each cell tracks exactly.
struct MPolicy {
  enum class Kind { Uniform, PerCell, Neighbor };
  Kind kind = Kind::Uniform;
  int uniform = 1;
  std::vector<int> per_cell;

  static MPolicy uniform_m(int m) { return {Kind::Uniform, m, {}}; }
  static MPolicy per_cell_m(std::vector<int> m) { return {Kind::PerCell, 0, std::move(m)}; }
  static MPolicy neighbor() { return {Kind::Neighbor, 0, {}}; }

  std::string describe() const {
    switch (kind) {
      case Kind::Uniform: return std::to_string(uniform);
      case Kind::Neighbor: return "neighbor";
      case Kind::PerCell: {
        std::string s;
        for (std::size_t i = 0; i < per_cell.size(); ++i)
          s += (i ? "/" : "") + std::to_string(per_cell[i]);
        return s;
      }
    }
    return "?";
  }
};

/// Per cell: the tracked interferers L_i, strongest first.
struct NeighborSets {
  std::vector<std::vector<int>> list;
  int m(int cell) const { return static_cast<int>(list[cell].size()); }
};

enum class LeMode : std::uint8_t { Off, On };

namespace detail {

/// One-hop neighbors by geometry: cells whose center distance is within 5%
/// of the smallest center spacing.
inline std::vector<int> one_hop_counts(const NetworkInstance& net) {
  if (!net.meta || net.meta->cell_x.size() != static_cast<std::size_t>(net.cell_count))
    throw std::invalid_argument("neighbor M policy requires cell positions in instance metadata");
  const auto& px = net.meta->cell_x;
  const auto& py = net.meta->cell_y;
  const int cells = net.cell_count;
  double min_d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cells; ++i)
    for (int k = i + 1; k < cells; ++k)
      min_d = std::min(min_d, std::hypot(px[i] - px[k], py[i] - py[k]));
  std::vector<int> counts(cells, 0);
  for (int i = 0; i < cells; ++i)
    for (int k = 0; k < cells; ++k)
      if (k != i && std::hypot(px[i] - px[k], py[i] - py[k]) <= 1.05 * min_d) ++counts[i];
  return counts;
}

}  // namespace detail

/// Ranks the other cells for each cell i by the average interference they
/// would generate onto cell i's users, (1/J_i) sum_j p_k g_kj l_k, and keeps
/// the top M_i. Equal scores break toward the lower cell id.
inline NeighborSets select_neighbors(const NetworkInstance& net, const MPolicy& policy) {
  const int cells = net.cell_count;
  std::vector<int> m(cells);
  switch (policy.kind) {
    case MPolicy::Kind::Uniform:
      if (policy.uniform < 1) throw std::invalid_argument("M must be >= 1");
      std::fill(m.begin(), m.end(), policy.uniform);
      break;
    case MPolicy::Kind::PerCell:
      if (static_cast<int>(policy.per_cell.size()) != cells)
        throw std::invalid_argument("per-cell M size mismatch");
      m = policy.per_cell;
      break;
    case MPolicy::Kind::Neighbor:
      m = detail::one_hop_counts(net);
      break;
  }
  NeighborSets out;
  out.list.resize(cells);
  for (int i = 0; i < cells; ++i) {
    std::vector<std::pair<double, int>> scored;
    scored.reserve(cells - 1);
    for (int k = 0; k < cells; ++k) {
      if (k == i) continue;
      double score = 0;
      for (int j : net.users_of_cell[i]) score += net.tx_power_per_ru[k] * net.g(k, j) * net.load[k];
      score /= static_cast<double>(net.users_of_cell[i].size());
      scored.emplace_back(score, k);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    const int mi = std::clamp(m[i], 1, cells - 1 > 0 ? cells - 1 : 1);
    const int keep = std::min<int>(mi, static_cast<int>(scored.size()));
    for (int t = 0; t < keep; ++t) out.list[i].push_back(scored[t].second);
  }
  return out;
}

/// Per-cell enumeration of interference scenarios over L_i with both beta
/// planes precomputed: LE-off treats cells outside L_i as silent, LE-on
/// treats them as permanently transmitting.
class ScenarioTable {
 public:
  ScenarioTable(const NetworkInstance& net, NeighborSets nbrs) : nbrs_(std::move(nbrs)) {
    const int cells = net.cell_count;
    cell_.resize(cells);
    for (int i = 0; i < cells; ++i) {
      CellPlane& cp = cell_[i];
      const auto& li = nbrs_.list[i];
      const int mi = static_cast<int>(li.size());
      const auto& users = net.users_of_cell[i];
      const int ji = static_cast<int>(users.size());
      cp.scenarios = 1u << mi;
      cp.users = users;
      cp.beta_off.resize(static_cast<std::size_t>(cp.scenarios) * ji);
      cp.beta_on.resize(cp.beta_off.size());
      std::vector<double> outside(ji, 0.0);  // interference mass beyond L_i
      for (int k = 0; k < cells; ++k) {
        if (k == i || std::find(li.begin(), li.end(), k) != li.end()) continue;
        for (int u = 0; u < ji; ++u)
          outside[u] += net.tx_power_per_ru[k] * net.g(k, users[u]) * net.load[k];
      }
      for (unsigned e = 0; e < cp.scenarios; ++e) {
        for (int u = 0; u < ji; ++u) {
          const int j = users[u];
          double active = 0;
          for (int t = 0; t < mi; ++t)
            if ((e >> t) & 1u) {
              const int k = li[t];
              active += net.tx_power_per_ru[k] * net.g(k, j) * net.load[k];
            }
          const double num = net.tx_power_per_ru[i] * net.g(i, j);
          cp.beta_off[static_cast<std::size_t>(e) * ji + u] =
              1.0 / std::log2(1.0 + num / (active + net.noise));
          cp.beta_on[static_cast<std::size_t>(e) * ji + u] =
              1.0 / std::log2(1.0 + num / (active + outside[u] + net.noise));
        }
      }
    }
  }

  const NeighborSets& neighbors() const { return nbrs_; }
  int m(int cell) const { return nbrs_.m(cell); }
  unsigned scenario_count(int cell) const { return cell_[cell].scenarios; }

  /// Scenario index induced on cell i by active set z: bit t set when the
  /// t-th entry of L_i is active.
  unsigned scenario_of(int cell, Cluster z) const {
    unsigned e = 0;
    const auto& li = nbrs_.list[cell];
    for (std::size_t t = 0; t < li.size(); ++t)
      if (z.contains(li[t])) e |= 1u << t;
    return e;
  }

  double beta(LeMode mode, int cell, unsigned scenario, int user) const {
    const CellPlane& cp = cell_[cell];
    const auto it = std::find(cp.users.begin(), cp.users.end(), user);
    const int u = static_cast<int>(it - cp.users.begin());
    const std::size_t idx = static_cast<std::size_t>(scenario) * cp.users.size() + u;
    return mode == LeMode::Off ? cp.beta_off[idx] : cp.beta_on[idx];
  }

  double beta_local(LeMode mode, int cell, unsigned scenario, int user_slot) const {
    const CellPlane& cp = cell_[cell];
    const std::size_t idx = static_cast<std::size_t>(scenario) * cp.users.size() + user_slot;
    return mode == LeMode::Off ? cp.beta_off[idx] : cp.beta_on[idx];
  }

  /// Coefficient model for building master columns from a cluster under this
  /// table: the cluster picks each cell's induced scenario.
  CoeffFn coeff_fn(LeMode mode) const {
    return [this, mode](const NetworkInstance&, Cluster s, int cell, int user) {
      return beta(mode, cell, scenario_of(cell, s), user);
    };
  }

 private:
  struct CellPlane {
    unsigned scenarios = 1;
    std::vector<int> users;
    std::vector<double> beta_off;
    std::vector<double> beta_on;
  };
  NeighborSets nbrs_;
  std::vector<CellPlane> cell_;
};

inline ScenarioTable build_scenarios(const NetworkInstance& net, const NeighborSets& nbrs) {
  return ScenarioTable(net, nbrs);
}

struct LocalPricingResult {
  Cluster active;           // z
  Column column;            // beta-based rates for the chosen served users
  double objective = 0;     // F(z*)
  double reduced_cost = 0;  // -F(z*) - lambda == p_z - omega - lambda
};

struct LocalPricingOptions {
  bool phase1 = false;
};

/// Exact local pricing: maximizes F(z) over nonempty active sets z by depth-first
/// search with an optimistic bound. For fixed z the scenario of each active
/// cell is forced, so z is the entire search space; ties in F break toward
/// the lowest cluster bitmask.
inline LocalPricingResult solve_pricing_local(const NetworkInstance& net,
                                              const ScenarioTable& table,
                                              const DualPrices& duals, LeMode mode,
                                              const LocalPricingOptions& opts = {}) {
  const int cells = net.cell_count;

  // best pi-weighted vertex value per (cell, scenario), monotone
  // nonincreasing as scenario bits are added
  std::vector<std::vector<double>> best_val(cells);
  std::vector<std::vector<int>> best_user(cells);
  std::vector<double> ptot(cells);
  for (int i = 0; i < cells; ++i) {
    ptot[i] = opts.phase1 ? 0.0 : net.cell_power(i);
    const unsigned count = table.scenario_count(i);
    best_val[i].resize(count);
    best_user[i].resize(count);
    const auto& users = net.users_of_cell[i];
    for (unsigned e = 0; e < count; ++e) {
      double bv = -std::numeric_limits<double>::infinity();
      int bj = -1;
      for (std::size_t u = 0; u < users.size(); ++u) {
        const double rate = net.load[i] * net.wb() / table.beta_local(mode, i, e, u);
        const double val = duals.pi[users[u]] * rate;
        if (val > bv) {
          bv = val;
          bj = users[u];
        }
      }
      best_val[i][e] = bv;
      best_user[i][e] = bj;
    }
  }

  const auto& nbr = table.neighbors().list;
  double best_f = -std::numeric_limits<double>::infinity();
  std::uint64_t best_z = 0;

  // scenario induced by the decided-active cells only; admissible because
  // activating more neighbors can only shrink a cell's value
  auto partial_scenario = [&](int cell, std::uint64_t z, std::uint64_t decided) {
    unsigned e = 0;
    const auto& li = nbr[cell];
    for (std::size_t t = 0; t < li.size(); ++t) {
      const std::uint64_t bit = std::uint64_t{1} << li[t];
      if ((z & bit) && (decided & bit)) e |= 1u << t;
    }
    return e;
  };

  auto bound = [&](std::uint64_t z, std::uint64_t decided) {
    double ub = 0;
    for (int i = 0; i < cells; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      const bool is_decided = decided & bit;
      if (is_decided && !(z & bit)) continue;
      const double val = best_val[i][partial_scenario(i, z, decided)] - ptot[i];
      ub += is_decided ? val : std::max(0.0, val);
    }
    return ub;
  };

  auto dfs = [&](auto&& self, int idx, std::uint64_t z, std::uint64_t decided) -> void {
    if (idx == cells) {
      if (z == 0) return;
      double f = 0;
      for (int i = 0; i < cells; ++i)
        if (z & (std::uint64_t{1} << i))
          f += best_val[i][partial_scenario(i, z, decided)] - ptot[i];
      if (f > best_f || (f == best_f && z < best_z)) {
        best_f = f;
        best_z = z;
      }
      return;
    }
    if (bound(z, decided) < best_f) return;
    const std::uint64_t bit = std::uint64_t{1} << idx;
    const bool promising = best_val[idx][partial_scenario(idx, z, decided)] - ptot[idx] > 0;
    if (promising) {
      self(self, idx + 1, z | bit, decided | bit);
      self(self, idx + 1, z, decided | bit);
    } else {
      self(self, idx + 1, z, decided | bit);
      self(self, idx + 1, z | bit, decided | bit);
    }
  };
  dfs(dfs, 0, 0, 0);

  LocalPricingResult out;
  out.active = Cluster(best_z);
  out.objective = best_f;
  out.reduced_cost = -best_f - duals.lambda;
  out.column.cluster = out.active;
  out.column.rate.assign(net.user_count(), 0.0);
  out.column.power = cluster_power(net, out.active);
  out.active.for_each([&](int i) {
    const unsigned e = table.scenario_of(i, out.active);
    const int j = best_user[i][e];
    out.column.served.emplace_back(i, j);
    out.column.rate[j] = net.load[i] * net.wb() / table.beta(mode, i, e, j);
  });
  return out;
}

}  // namespace cellsched

#endif  // CELLSCHED_PRICING_LOCAL_HPP
