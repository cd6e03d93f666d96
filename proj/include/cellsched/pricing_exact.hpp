#ifndef CELLSCHED_PRICING_EXACT_HPP
#define CELLSCHED_PRICING_EXACT_HPP

#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

#include "cellsched/master.hpp"
#include "cellsched/model.hpp"

namespace cellsched {

struct PricedColumn {
  Column column;
  double reduced_cost = 0;
};

/// Memo of per-cluster vertex rates, valid for one instance. A cluster's
/// rates are reused across pricing rounds of the same solve.
class VertexRateCache {
 public:
  const std::vector<double>& rates(const NetworkInstance& net, Cluster s) {
    auto it = table_.find(s.bits());
    if (it != table_.end()) return it->second;
    std::vector<double> r(net.user_count(), 0.0);
    s.for_each([&](int cell) {
      for (int j : net.users_of_cell[cell]) r[j] = vertex_rate(net, s, cell, j);
    });
    return table_.emplace(s.bits(), std::move(r)).first->second;
  }

 private:
  std::unordered_map<std::uint64_t, std::vector<double>> table_;
};

struct ExactPricingOptions {
  int exact_limit = 20;          // refuse scans beyond 2^limit clusters
  bool phase1 = false;           // price against zero column costs
  VertexRateCache* cache = nullptr;
};

/// Closed-form pricing for one cluster: per member cell the best user under
/// pi-weighted vertex rates (ties to the lowest user index), omega_s the sum
/// of those maxima, reduced cost p_s - omega_s - lambda.
inline PricedColumn price_cluster(const NetworkInstance& net, Cluster s, const DualPrices& duals,
                                  const ExactPricingOptions& opts = {}) {
  VertexRateCache local;
  VertexRateCache& cache = opts.cache ? *opts.cache : local;
  const std::vector<double>& r = cache.rates(net, s);

  PricedColumn out;
  out.column.cluster = s;
  out.column.rate.assign(net.user_count(), 0.0);
  out.column.power = cluster_power(net, s);
  double omega = 0;
  s.for_each([&](int cell) {
    int best_j = -1;
    double best_val = -std::numeric_limits<double>::infinity();
    for (int j : net.users_of_cell[cell]) {
      const double val = duals.pi[j] * r[j];
      if (val > best_val) {
        best_val = val;
        best_j = j;
      }
    }
    out.column.served.emplace_back(cell, best_j);
    out.column.rate[best_j] = r[best_j];
    omega += best_val;
  });
  const double cost = opts.phase1 ? 0.0 : out.column.power;
  out.reduced_cost = cost - omega - duals.lambda;
  return out;
}

/// Scans every nonempty cluster in increasing bitmask order and returns the
/// minimum reduced cost column; the first minimum wins on ties.
inline PricedColumn price_all(const NetworkInstance& net, const DualPrices& duals,
                              const ExactPricingOptions& opts = {}) {
  if (net.cell_count > opts.exact_limit)
    throw std::length_error("exact pricing limited to " + std::to_string(opts.exact_limit) +
                            " cells");
  VertexRateCache local;
  ExactPricingOptions sub = opts;
  if (!sub.cache) sub.cache = &local;

  PricedColumn best;
  best.reduced_cost = std::numeric_limits<double>::infinity();
  const std::uint64_t end = std::uint64_t{1} << net.cell_count;
  for (std::uint64_t mask = 1; mask < end; ++mask) {
    PricedColumn cand = price_cluster(net, Cluster(mask), duals, sub);
    if (cand.reduced_cost < best.reduced_cost) best = std::move(cand);
  }
  return best;
}

}  // namespace cellsched

#endif  // CELLSCHED_PRICING_EXACT_HPP
