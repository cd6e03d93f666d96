#ifndef CELLSCHED_INSTANCE_IO_HPP
#define CELLSCHED_INSTANCE_IO_HPP

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cellsched/model.hpp"

namespace cellsched {

inline constexpr const char* kInstanceFormatVersion = "cellsched-instance/1";

namespace detail {

inline std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void put_array(std::ostream& os, const char* key, const std::vector<double>& v) {
  os << key;
  for (double x : v) os << ' ' << fmt_double(x);
  os << '\n';
}

inline void put_array(std::ostream& os, const char* key, const std::vector<int>& v) {
  os << key;
  for (int x : v) os << ' ' << x;
  os << '\n';
}

}  // namespace detail

/// Serializes an instance in the self-describing key/value text format.
/// Gains are written as a dense J x I matrix (one row per user) in linear
/// scale. Doubles use %.17g so a write/read round trip is bit-exact.
inline void write_instance(std::ostream& os, const NetworkInstance& net) {
  const int users = net.user_count();
  os << kInstanceFormatVersion << '\n';
  os << "cells " << net.cell_count << '\n';
  os << "users " << users << '\n';
  os << "ru_count " << net.ru_count << '\n';
  os << "ru_bandwidth " << detail::fmt_double(net.ru_bandwidth) << '\n';
  os << "circuit_power " << detail::fmt_double(net.circuit_power) << '\n';
  os << "noise " << detail::fmt_double(net.noise) << '\n';
  os << "deadline " << detail::fmt_double(net.deadline) << '\n';
  detail::put_array(os, "cell_of_user", net.cell_of_user);
  detail::put_array(os, "tx_power_per_ru", net.tx_power_per_ru);
  detail::put_array(os, "load", net.load);
  detail::put_array(os, "demand", net.demand);
  os << "gain\n";
  for (int j = 0; j < users; ++j) {
    for (int k = 0; k < net.cell_count; ++k) {
      if (k) os << ' ';
      os << detail::fmt_double(net.g(k, j));
    }
    os << '\n';
  }
  if (net.meta) {
    const InstanceMeta& m = *net.meta;
    os << "meta_layout " << m.layout << '\n';
    os << "meta_radius_m " << detail::fmt_double(m.radius_m) << '\n';
    os << "meta_carrier_mhz " << detail::fmt_double(m.carrier_mhz) << '\n';
    os << "meta_bs_height_m " << detail::fmt_double(m.bs_height_m) << '\n';
    os << "meta_user_height_m " << detail::fmt_double(m.user_height_m) << '\n';
    os << "meta_env_correction_db " << detail::fmt_double(m.env_correction_db) << '\n';
    os << "meta_shadowing_sigma_db " << detail::fmt_double(m.shadowing_sigma_db) << '\n';
    os << "meta_seed " << m.seed << '\n';
    if (!m.cell_x.empty()) {
      detail::put_array(os, "cell_x", m.cell_x);
      detail::put_array(os, "cell_y", m.cell_y);
    }
  }
}

inline void write_instance_file(const std::string& path, const NetworkInstance& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_instance(out, net);
  if (!out) throw std::runtime_error("write failed: " + path);
}

/// Parses the cellsched-instance/1 format. The version line must come first
/// and `cells`/`users` must appear before any per-cell or per-user array.
inline NetworkInstance read_instance(std::istream& is) {
  NetworkInstance net;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty instance file");
  if (line != kInstanceFormatVersion)
    throw std::runtime_error("unsupported format version: " + line);

  int users = -1;
  bool have_meta = false;
  InstanceMeta meta;

  auto need_sizes = [&](const std::string& key) {
    if (net.cell_count <= 0 || users < 0)
      throw std::runtime_error("'" + key + "' before cells/users");
  };
  auto parse_doubles = [](std::istringstream& ss, int n, const std::string& key) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
      if (!(ss >> v[i])) throw std::runtime_error("short array for key " + key);
    return v;
  };

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key == "cells") {
      ss >> net.cell_count;
    } else if (key == "users") {
      ss >> users;
      net.cell_of_user.assign(users, 0);
      net.demand.assign(users, 0);
    } else if (key == "ru_count") {
      ss >> net.ru_count;
    } else if (key == "ru_bandwidth") {
      ss >> net.ru_bandwidth;
    } else if (key == "circuit_power") {
      ss >> net.circuit_power;
    } else if (key == "noise") {
      ss >> net.noise;
    } else if (key == "deadline") {
      ss >> net.deadline;
    } else if (key == "cell_of_user") {
      need_sizes(key);
      for (int j = 0; j < users; ++j)
        if (!(ss >> net.cell_of_user[j])) throw std::runtime_error("short cell_of_user");
    } else if (key == "tx_power_per_ru") {
      need_sizes(key);
      net.tx_power_per_ru = parse_doubles(ss, net.cell_count, key);
    } else if (key == "load") {
      need_sizes(key);
      net.load = parse_doubles(ss, net.cell_count, key);
    } else if (key == "demand") {
      need_sizes(key);
      net.demand = parse_doubles(ss, users, key);
    } else if (key == "gain") {
      need_sizes(key);
      net.gain.assign(static_cast<std::size_t>(net.cell_count) * users, 0.0);
      for (int j = 0; j < users; ++j) {
        if (!std::getline(is, line)) throw std::runtime_error("truncated gain matrix");
        std::istringstream row(line);
        for (int k = 0; k < net.cell_count; ++k)
          if (!(row >> net.g(k, j))) throw std::runtime_error("short gain row");
      }
    } else if (key == "meta_layout") {
      ss >> meta.layout;
      have_meta = true;
    } else if (key == "meta_radius_m") {
      ss >> meta.radius_m;
      have_meta = true;
    } else if (key == "meta_carrier_mhz") {
      ss >> meta.carrier_mhz;
      have_meta = true;
    } else if (key == "meta_bs_height_m") {
      ss >> meta.bs_height_m;
      have_meta = true;
    } else if (key == "meta_user_height_m") {
      ss >> meta.user_height_m;
      have_meta = true;
    } else if (key == "meta_env_correction_db") {
      ss >> meta.env_correction_db;
      have_meta = true;
    } else if (key == "meta_shadowing_sigma_db") {
      ss >> meta.shadowing_sigma_db;
      have_meta = true;
    } else if (key == "meta_seed") {
      ss >> meta.seed;
      have_meta = true;
    } else if (key == "cell_x") {
      need_sizes(key);
      meta.cell_x = parse_doubles(ss, net.cell_count, key);
      have_meta = true;
    } else if (key == "cell_y") {
      need_sizes(key);
      meta.cell_y = parse_doubles(ss, net.cell_count, key);
      have_meta = true;
    } else {
      throw std::runtime_error("unknown key in instance file: " + key);
    }
  }
  if (have_meta) net.meta = std::move(meta);
  net.finalize();
  return net;
}

inline NetworkInstance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(in);
}

}  // namespace cellsched

#endif  // CELLSCHED_INSTANCE_IO_HPP
