#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "cellsched/algorithms.hpp"
#include "cellsched/experiment.hpp"
#include "cellsched/instance_io.hpp"
#include "cellsched/netgen.hpp"

namespace {

using namespace cellsched;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

MPolicy parse_m(const std::string& s) {
  if (s == "neighbor") return MPolicy::neighbor();
  return MPolicy::uniform_m(std::stoi(s));
}

std::vector<MPolicy> parse_m_list(const std::vector<std::string>& items) {
  std::vector<MPolicy> out;
  for (const auto& s : items) out.push_back(parse_m(s));
  return out;
}

void add_gen_flags(CLI::App* cmd, netgen::GenConfig& cfg, std::string& layout,
                   std::string& shadowing) {
  cmd->add_option("--layout", layout, "single | hex7 | hex19")->capture_default_str();
  cmd->add_option("--radius", cfg.radius_m, "cell radius, meters")->capture_default_str();
  cmd->add_option("--users", cfg.users_per_cell, "users per cell")->capture_default_str();
  cmd->add_option("--demand", cfg.demand_bits, "demand per user, bits")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "base PRNG seed")->capture_default_str();
  cmd->add_option("--sigma", cfg.shadowing_sigma_db, "shadowing std dev, dB")
      ->capture_default_str();
  cmd->add_option("--shadowing", shadowing, "per-user | per-link")->capture_default_str();
  cmd->add_option("--tx-power", cfg.tx_power_per_ru_w, "transmit power per RU, W")
      ->capture_default_str();
  cmd->add_option("--circuit-power", cfg.circuit_power_w, "circuit power per BS, W")
      ->capture_default_str();
  cmd->add_option("--noise-density", cfg.noise_dbm_per_hz, "noise density, dBm/Hz")
      ->capture_default_str();
  cmd->add_option("--load", cfg.load, "per-cell load in (0, 1]")->capture_default_str();
}

void finish_gen_config(netgen::GenConfig& cfg, const std::string& layout,
                       const std::string& shadowing) {
  cfg.layout = netgen::layout_from_string(layout);
  if (shadowing == "per-user") {
    cfg.shadowing = netgen::Shadowing::PerUser;
  } else if (shadowing == "per-link") {
    cfg.shadowing = netgen::Shadowing::PerLink;
  } else {
    throw std::invalid_argument("--shadowing must be per-user or per-link");
  }
}

void print_report(const SolveReport& rep) {
  std::printf("algorithm      %s\n", rep.algorithm.c_str());
  std::printf("termination    %s\n", to_string(rep.termination));
  std::printf("energy         %.6f J\n", rep.energy);
  std::printf("time used      %.6f s\n", rep.schedule.total_time());
  std::printf("iterations     %d\n", rep.iterations);
  std::printf("active columns %zu\n", rep.schedule.entries.size());
}

int run_main(int argc, char** argv) {
  CLI::App app{"cellsched: energy-minimal base-station cluster scheduling"};
  app.require_subcommand(1);

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance file");
  netgen::GenConfig gen_cfg;
  std::string gen_layout = "hex7", gen_shadowing = "per-user", gen_out = "instance.cs1";
  add_gen_flags(gen, gen_cfg, gen_layout, gen_shadowing);
  gen->add_option("--T", gen_cfg.deadline_s, "deadline, seconds")->capture_default_str();
  gen->add_option("--out", gen_out, "output path")->capture_default_str();

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "solve one instance file");
  std::string solve_path;
  std::string solve_algo = "ocs";
  std::string solve_m = "neighbor";
  std::string solve_le_mode = "off";
  double solve_t = 0;
  bool solve_force_exact = false;
  solve->add_option("instance", solve_path, "instance file")->required();
  solve->add_option("--algo", solve_algo, "ocs | tdma | allon | near | bound | le")
      ->capture_default_str();
  solve->add_option("--T", solve_t, "override the instance deadline, seconds");
  solve->add_option("--M", solve_m, "M policy for near/bound/le (int or 'neighbor')")
      ->capture_default_str();
  solve->add_option("--le-mode", solve_le_mode, "le run mode: off | on")->capture_default_str();
  solve->add_flag("--force-exact", solve_force_exact, "allow exact ocs on large networks");

  // ---- run ----
  auto* run = app.add_subcommand("run", "run an algorithm suite over seeded instances");
  experiment::RunOptions run_opt;
  std::string run_layout = "hex7", run_shadowing = "per-user";
  std::vector<std::string> run_m_items = {"5"};
  std::string run_algos = "ocs,near,allon,tdma";
  add_gen_flags(run, run_opt.base, run_layout, run_shadowing);
  run->add_option("--algos", run_algos, "comma list: ocs,near,allon,tdma")
      ->capture_default_str();
  run->add_option("--T", run_opt.t_values, "deadline sweep, seconds")
      ->delimiter(',')
      ->capture_default_str();
  run->add_option("--M", run_m_items, "M sweep for near (ints or 'neighbor')")->delimiter(',');
  run->add_option("--instances", run_opt.instances, "instances per configuration")
      ->capture_default_str();
  run->add_option("--jobs", run_opt.jobs, "parallel workers")->capture_default_str();
  run->add_option("--out", run_opt.out_dir, "output directory")->capture_default_str();
  run->add_flag("--force-exact", run_opt.force_exact, "allow exact ocs on large networks");
  run->add_flag("--timing", run_opt.timing, "append a wall_ms column (non-deterministic)");

  // ---- bound ----
  auto* bnd = app.add_subcommand("bound", "LE-off/LE-on bounding sweep");
  experiment::BoundRunOptions bound_opt;
  std::string bound_layout = "hex19", bound_shadowing = "per-user";
  std::vector<std::string> bound_m_items = {"1", "3", "5", "7", "neighbor"};
  add_gen_flags(bnd, bound_opt.base, bound_layout, bound_shadowing);
  bnd->add_option("--T", bound_opt.t_values, "deadline sweep, seconds")
      ->delimiter(',')
      ->capture_default_str();
  bnd->add_option("--M", bound_m_items, "M sweep (ints or 'neighbor')")->delimiter(',');
  bnd->add_option("--instances", bound_opt.instances, "instances")->capture_default_str();
  bnd->add_option("--jobs", bound_opt.jobs, "parallel workers")->capture_default_str();
  bnd->add_option("--out", bound_opt.out_dir, "output directory")->capture_default_str();
  bnd->add_flag("--with-ocs", bound_opt.with_ocs, "also solve each instance exactly");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (gen->parsed()) {
    finish_gen_config(gen_cfg, gen_layout, gen_shadowing);
    const NetworkInstance net = netgen::generate(gen_cfg);
    write_instance_file(gen_out, net);
    std::printf("wrote %s (%d cells, %d users)\n", gen_out.c_str(), net.cell_count,
                net.user_count());
    return kExitOk;
  }

  if (solve->parsed()) {
    NetworkInstance net = read_instance_file(solve_path);
    if (solve->count("--T")) net.deadline = solve_t;
    if (net.deadline <= 0) throw std::invalid_argument("deadline must be positive");
    if (solve_algo == "ocs") {
      if (net.cell_count > experiment::kExactCliCellLimit && !solve_force_exact)
        throw std::invalid_argument(
            "exact ocs beyond " + std::to_string(experiment::kExactCliCellLimit) +
            " cells is long-running; pass --force-exact");
      print_report(ocs(net));
    } else if (solve_algo == "tdma") {
      print_report(tdma(net));
    } else if (solve_algo == "allon") {
      print_report(all_on(net));
    } else if (solve_algo == "near") {
      print_report(near(net, parse_m(solve_m)));
    } else if (solve_algo == "bound") {
      const BoundReport b = bound(net, parse_m(solve_m));
      std::printf("M policy   %s\n", b.policy.describe().c_str());
      std::printf("E_LE-off   %s\n",
                  b.off_feasible ? std::to_string(b.e_le_off).c_str() : "infeasible");
      std::printf("E_LE-on    %s\n",
                  b.on_feasible ? std::to_string(b.e_le_on).c_str() : "infeasible");
      std::printf("E_NEAR     %s\n",
                  b.near_report.feasible() ? std::to_string(b.e_near).c_str() : "infeasible");
      std::printf("gap        %.6f\n", b.gap());
    } else if (solve_algo == "le") {
      const LeMode mode = solve_le_mode == "on" ? LeMode::On : LeMode::Off;
      const NeighborSets nbrs = select_neighbors(net, parse_m(solve_m));
      const ScenarioTable table = build_scenarios(net, nbrs);
      const auto cg = cellsched::detail::run_le(net, table, mode, {});
      if (cg.termination == Termination::Converged) {
        std::printf("LE-%s objective %.6f J after %d rounds\n", solve_le_mode.c_str(),
                    cg.state.objective, cg.rounds);
      } else {
        std::printf("LE-%s %s after %d rounds\n", solve_le_mode.c_str(),
                    to_string(cg.termination), cg.rounds);
      }
    } else {
      throw std::invalid_argument("unknown algorithm " + solve_algo);
    }
    return kExitOk;
  }

  if (run->parsed()) {
    finish_gen_config(run_opt.base, run_layout, run_shadowing);
    run_opt.algos.clear();
    std::stringstream ss(run_algos);
    for (std::string item; std::getline(ss, item, ',');)
      if (!item.empty()) run_opt.algos.push_back(item);
    run_opt.m_values = parse_m_list(run_m_items);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = experiment::run_suite(run_opt);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    experiment::write_run_artifacts(run_opt, rows, secs);
    std::printf("wrote %zu rows to %s (%.2f s)\n", rows.size(), run_opt.out_dir.c_str(), secs);
    return kExitOk;
  }

  if (bnd->parsed()) {
    finish_gen_config(bound_opt.base, bound_layout, bound_shadowing);
    bound_opt.m_values = parse_m_list(bound_m_items);
    const auto t0 = std::chrono::steady_clock::now();
    const auto rows = experiment::run_bound_suite(bound_opt);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    experiment::write_bound_artifacts(bound_opt, rows, secs);
    std::printf("wrote %zu rows to %s (%.2f s)\n", rows.size(), bound_opt.out_dir.c_str(), secs);
    return kExitOk;
  }
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_main(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInternal;
  }
}
