#ifndef CELLSCHED_NETGEN_HPP
#define CELLSCHED_NETGEN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cellsched/model.hpp"
#include "cellsched/prng.hpp"

namespace cellsched::netgen {

enum class Layout : std::uint8_t { Single, Hex7, Hex19, Custom };

inline const char* to_string(Layout l) {
  switch (l) {
    case Layout::Single: return "single";
    case Layout::Hex7: return "hex7";
    case Layout::Hex19: return "hex19";
    case Layout::Custom: return "custom";
  }
  return "?";
}

inline Layout layout_from_string(const std::string& s) {
  if (s == "single") return Layout::Single;
  if (s == "hex7") return Layout::Hex7;
  if (s == "hex19") return Layout::Hex19;
  if (s == "custom") return Layout::Custom;
  throw std::invalid_argument("unknown layout: " + s);
}

/// Shadowing correlation across the links of one user. PerUser draws one
/// value per user and applies it to every link, which keeps SINR ratios
/// stable the way measured deployments (and the reference energy scales)
/// behave; PerLink draws independently per (cell, user) pair.
enum class Shadowing : std::uint8_t { PerUser, PerLink };

/// Generator configuration. Defaults follow the Table-II style macro setup:
/// 500 m cells at 2 GHz, 25 RUs of 180 kHz, 5 users per cell with 2 Mbit
/// demands, 1 W per RU, 5 W circuit power, -174 dBm/Hz noise, 8 dB shadowing.
struct GenConfig {
  Layout layout = Layout::Hex7;
  std::vector<std::pair<double, double>> custom_centers;
  double radius_m = 500;            // hexagon center-to-vertex distance
  int users_per_cell = 5;
  double demand_bits = 2e6;
  double carrier_mhz = 2000;
  int ru_count = 25;
  double ru_bandwidth_hz = 180e3;
  double tx_power_per_ru_w = 1.0;
  double circuit_power_w = 5.0;
  double noise_dbm_per_hz = -174;
  double shadowing_sigma_db = 8;
  Shadowing shadowing = Shadowing::PerUser;
  double load = 1.0;
  double bs_height_m = 30;
  double user_height_m = 1.5;
  double env_correction_db = 0;     // 0 dB medium city, 3 dB metropolitan
  double deadline_s = 2.0;
  std::uint64_t seed = 1;

  void validate() const {
    if (!(radius_m > 0)) throw std::invalid_argument("radius must be positive");
    if (carrier_mhz < 1500 || carrier_mhz > 2000)
      throw std::invalid_argument("COST-231-HATA is valid for 1500-2000 MHz");
    if (users_per_cell < 1) throw std::invalid_argument("need at least one user per cell");
    if (!(demand_bits > 0) || !(deadline_s > 0))
      throw std::invalid_argument("demand and deadline must be positive");
    if (ru_count < 1 || !(ru_bandwidth_hz > 0)) throw std::invalid_argument("bad RU grid");
    if (!(tx_power_per_ru_w > 0) || !(circuit_power_w > 0))
      throw std::invalid_argument("powers must be positive");
    if (shadowing_sigma_db < 0) throw std::invalid_argument("sigma must be nonnegative");
    if (!(load > 0) || load > 1) throw std::invalid_argument("load must be in (0, 1]");
    if (!(bs_height_m > 0) || !(user_height_m > 0))
      throw std::invalid_argument("antenna heights must be positive");
    if (layout == Layout::Custom && custom_centers.empty())
      throw std::invalid_argument("custom layout needs cell centers");
    if (layout == Layout::Custom && custom_centers.size() > 64)
      throw std::invalid_argument("at most 64 cells");
  }
};

/// COST-231-HATA path loss in dB. Distances are clamped at 1 m.
inline double pathloss_db(double distance_m, const GenConfig& cfg) {
  const double d_km = std::max(distance_m, 1.0) / 1000.0;
  const double lf = std::log10(cfg.carrier_mhz);
  const double lhb = std::log10(cfg.bs_height_m);
  const double a_hm = (1.1 * lf - 0.7) * cfg.user_height_m - (1.56 * lf - 0.8);
  return 46.3 + 33.9 * lf - 13.82 * lhb - a_hm + (44.9 - 6.55 * lhb) * std::log10(d_km) +
         cfg.env_correction_db;
}

/// Cell centers for the layout. Hex grids use flat-top hexagons of
/// circumradius R on the lattice q*(1.5R, sqrt(3)/2 R) + r*(0, sqrt(3) R),
/// enumerated ring by ring, (q, r) lexicographic within a ring.
inline std::vector<std::pair<double, double>> layout_centers(const GenConfig& cfg) {
  if (cfg.layout == Layout::Custom) return cfg.custom_centers;
  if (cfg.layout == Layout::Single) return {{0.0, 0.0}};
  const int rings = cfg.layout == Layout::Hex7 ? 1 : 2;
  const double r3 = std::sqrt(3.0);
  std::vector<std::pair<int, int>> axial;
  for (int q = -rings; q <= rings; ++q)
    for (int r = -rings; r <= rings; ++r) {
      const int dist = (std::abs(q) + std::abs(r) + std::abs(q + r)) / 2;
      if (dist <= rings) axial.emplace_back(q, r);
    }
  std::sort(axial.begin(), axial.end(), [](const auto& a, const auto& b) {
    const int da = (std::abs(a.first) + std::abs(a.second) + std::abs(a.first + a.second)) / 2;
    const int db = (std::abs(b.first) + std::abs(b.second) + std::abs(b.first + b.second)) / 2;
    if (da != db) return da < db;
    return a < b;
  });
  std::vector<std::pair<double, double>> centers;
  centers.reserve(axial.size());
  for (const auto& [q, r] : axial)
    centers.emplace_back(1.5 * cfg.radius_m * q, r3 * cfg.radius_m * (r + q / 2.0));
  return centers;
}

/// Point-in-hexagon test for a flat-top hexagon of circumradius R.
inline bool inside_hexagon(double dx, double dy, double radius) {
  const double r3 = std::sqrt(3.0);
  dx = std::abs(dx);
  dy = std::abs(dy);
  return dx <= radius && dy <= r3 / 2.0 * radius && r3 * dx + dy <= r3 * radius;
}

/// Builds a seeded instance: users uniform in their cell's hexagon, gains
/// from COST-231-HATA plus i.i.d. log-normal shadowing per link. Placement
/// and shadowing use per-(cell, user) substreams, so draws are stable under
/// unrelated configuration changes.
inline NetworkInstance generate(const GenConfig& cfg) {
  cfg.validate();
  const auto centers = layout_centers(cfg);
  const int cells = static_cast<int>(centers.size());
  const int users = cells * cfg.users_per_cell;

  NetworkInstance net;
  net.cell_count = cells;
  net.cell_of_user.resize(users);
  net.tx_power_per_ru.assign(cells, cfg.tx_power_per_ru_w);
  net.circuit_power = cfg.circuit_power_w;
  net.ru_count = cfg.ru_count;
  net.ru_bandwidth = cfg.ru_bandwidth_hz;
  net.noise = std::pow(10.0, (cfg.noise_dbm_per_hz - 30.0) / 10.0) * cfg.ru_bandwidth_hz;
  net.load.assign(cells, cfg.load);
  net.demand.assign(users, cfg.demand_bits);
  net.deadline = cfg.deadline_s;
  net.gain.assign(static_cast<std::size_t>(cells) * users, 0.0);

  std::vector<std::pair<double, double>> user_pos(users);
  for (int i = 0; i < cells; ++i) {
    SplitMix64 pos = substream(cfg.seed, 1, static_cast<std::uint64_t>(i));
    for (int u = 0; u < cfg.users_per_cell; ++u) {
      const int j = i * cfg.users_per_cell + u;
      net.cell_of_user[j] = i;
      double dx, dy;
      do {
        dx = pos.uniform(-cfg.radius_m, cfg.radius_m);
        dy = pos.uniform(-std::sqrt(3.0) / 2.0 * cfg.radius_m,
                         std::sqrt(3.0) / 2.0 * cfg.radius_m);
      } while (!inside_hexagon(dx, dy, cfg.radius_m));
      user_pos[j] = {centers[i].first + dx, centers[i].second + dy};
    }
  }
  for (int i = 0; i < cells; ++i) {
    for (int u = 0; u < cfg.users_per_cell; ++u) {
      const int j = i * cfg.users_per_cell + u;
      SplitMix64 shadow =
          substream(cfg.seed, 2, (static_cast<std::uint64_t>(i) << 32) | static_cast<unsigned>(u));
      const double common_db = cfg.shadowing == Shadowing::PerUser
                                   ? cfg.shadowing_sigma_db * shadow.normal()
                                   : 0.0;
      for (int k = 0; k < cells; ++k) {
        const double d =
            std::hypot(user_pos[j].first - centers[k].first, user_pos[j].second - centers[k].second);
        const double x_db = cfg.shadowing == Shadowing::PerUser
                                ? common_db
                                : cfg.shadowing_sigma_db * shadow.normal();
        net.g(k, j) = std::pow(10.0, -(pathloss_db(d, cfg) + x_db) / 10.0);
      }
    }
  }

  InstanceMeta meta;
  meta.layout = to_string(cfg.layout);
  meta.radius_m = cfg.radius_m;
  meta.carrier_mhz = cfg.carrier_mhz;
  meta.bs_height_m = cfg.bs_height_m;
  meta.user_height_m = cfg.user_height_m;
  meta.env_correction_db = cfg.env_correction_db;
  meta.shadowing_sigma_db = cfg.shadowing_sigma_db;
  meta.seed = cfg.seed;
  meta.cell_x.reserve(cells);
  meta.cell_y.reserve(cells);
  for (const auto& [x, y] : centers) {
    meta.cell_x.push_back(x);
    meta.cell_y.push_back(y);
  }
  net.meta = std::move(meta);
  net.finalize();
  return net;
}

}  // namespace cellsched::netgen

#endif  // CELLSCHED_NETGEN_HPP
