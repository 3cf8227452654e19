// thermovi command-line front end.
//
//   thermovi simulate --system oscillator --h 0.01 --t-final 1000 --out out/
//   thermovi bench --parallel
//   thermovi table [--slow]
//   thermovi geometry-check --system ideal-gas --points 100
//   thermovi convergence --system oscillator --h 0.1 --h 0.01 --h 0.001

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thermovi/errors.hpp"
#include "thermovi/experiment.hpp"
#include "thermovi/integrate.hpp"
#include "thermovi/reference.hpp"
#include "thermovi/sweep.hpp"
#include "thermovi/systems.hpp"

using namespace thermovi;

namespace {

struct Overrides {
  std::string config;
  std::string system;
  double h = 0.0;
  double t_final = 0.0;
  double gamma = 0.0;
  std::string init_mode;
  std::vector<std::string> methods;
  std::string out;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--system", o.system, "oscillator | ideal-gas | van-der-waals | two-pistons");
  cmd->add_option("--h", o.h, "time step");
  cmd->add_option("--t-final", o.t_final, "final time");
  cmd->add_option("--gamma", o.gamma, "friction coefficient");
  cmd->add_option("--init-mode", o.init_mode, "exact | reference | hold | taylor");
  cmd->add_option("--method", o.methods, "variational | rk2 | reference (repeatable)");
  cmd->add_option("--out", o.out, "output directory for CSV files");
}

bench::ExperimentConfig build_config(const CLI::App* cmd, const Overrides& o) {
  bench::ExperimentConfig cfg = o.config.empty() ? bench::ExperimentConfig{} : bench::load_config(o.config);
  const bool have_system = cmd->count("--system") > 0;
  if (have_system) cfg.system = o.system;
  if (o.config.empty() || have_system) {
    // System defaults apply unless the config file set the value.
    const auto e = systems::by_name(cfg.system);
    if (o.config.empty()) {
      cfg.h = e.default_h;
      cfg.t_final = e.default_t_final;
    }
  }
  if (cmd->count("--h")) cfg.h = o.h;
  if (cmd->count("--t-final")) cfg.t_final = o.t_final;
  if (cmd->count("--gamma")) cfg.params["gamma"] = o.gamma;
  if (cmd->count("--init-mode")) cfg.init_mode = o.init_mode;
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(bench::parse_method(m));
  }
  if (cmd->count("--out")) cfg.out_dir = o.out;
  return cfg;
}

void print_report(const bench::ErrorReport& r) {
  std::printf("%s h=%g t_final=%g (errors vs %s)\n", r.system.c_str(), r.h, r.t_final, r.truth.c_str());
  std::printf("  %-12s %12s %12s %12s %12s %12s %9s\n", "method", "pos_err", "S_err", "S_err_win", "H_dev",
              "H_vel_dev", "seconds");
  for (const auto& m : r.methods) {
    std::printf("  %-12s %12.4e %12.4e %12.4e %12.4e %12.4e %9.3f", bench::to_string(m.method).c_str(),
                m.max_pos_err, m.max_S_err, m.max_S_err_window, m.max_H_dev, m.max_H_vel_dev, m.seconds);
    if (m.method == bench::Method::variational)
      std::printf("  |H+-H-|=%.2e match=%.2e newton=%.2e", m.max_H_pm_gap, m.momentum_matching,
                  m.max_newton_residual);
    if (!m.entropy_monotone) std::printf("  S-decreasing");
    if (m.failed) std::printf("  FAILED at step %zu: %s", m.failed_step, m.failure.c_str());
    std::printf("\n");
  }
}

int first_failure(const bench::ErrorReport& r) {
  for (const auto& m : r.methods)
    if (m.failed) {
      std::fprintf(stderr, "error: %s failed at step %zu: %s\n", bench::to_string(m.method).c_str(), m.failed_step,
                   m.failure.c_str());
      return 3;
    }
  return 0;
}

int cmd_table(bool slow, bool parallel) {
  std::vector<double> hs{0.1, 0.01, 0.001};
  if (slow) hs.push_back(1e-4);
  const auto cells = sweep::oscillator_table_cells(hs);
  const auto reports = sweep::run_cells(cells, parallel ? sweep::Execution::parallel : sweep::Execution::serial);

  std::printf("Oscillator, gamma=0.1, t in [0,1000], exact start\n\n");
  std::printf("%-8s %14s %14s %10s\n", "h", "variational", "rk2", "seconds");
  std::printf("position error\n");
  for (const auto& r : reports)
    std::printf("%-8g %14.4e %14.4e %10.3f\n", r.h, r.get(bench::Method::variational).max_pos_err,
                r.get(bench::Method::rk2).max_pos_err,
                r.get(bench::Method::variational).seconds + r.get(bench::Method::rk2).seconds);
  std::printf("entropy error, first 1500 steps\n");
  for (const auto& r : reports)
    std::printf("%-8g %14.4e %14.4e\n", r.h, r.get(bench::Method::variational).max_S_err_window,
                r.get(bench::Method::rk2).max_S_err_window);
  std::printf("Hamiltonian deviation\n%-8s %14s %14s %14s %14s\n", "h", "H+", "H-", "velocity", "rk2");
  for (const auto& r : reports) {
    const auto& v = r.get(bench::Method::variational);
    std::printf("%-8g %14.4e %14.4e %14.4e %14.4e\n", r.h, v.max_H_dev, v.max_H_minus_dev, v.max_H_vel_dev,
                r.get(bench::Method::rk2).max_H_dev);
  }

  std::printf("\nGases, h=0.01, t in [0,10], x0=x1=1, S0=10\n");
  std::printf("%-14s %12s %12s %12s %12s %12s %12s\n", "system", "pos var", "pos rk2", "S var", "S rk2", "H var",
              "H rk2");
  for (const std::string name : {"ideal-gas", "van-der-waals"}) {
    bench::ExperimentConfig c;
    c.system = name;
    c.h = 0.01;
    c.t_final = 10.0;
    c.methods = {bench::Method::variational, bench::Method::rk2};
    const auto r = bench::run_experiment(c);
    const auto& v = r.get(bench::Method::variational);
    const auto& k = r.get(bench::Method::rk2);
    std::printf("%-14s %12.4e %12.4e %12.4e %12.4e %12.4e %12.4e\n", name.c_str(), v.max_pos_err, k.max_pos_err,
                v.max_S_err, k.max_S_err, v.max_H_dev, k.max_H_dev);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational integrators for adiabatically closed thermodynamic systems"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  Overrides sim;
  auto* simulate = app.add_subcommand("simulate", "run one experiment and write CSV output");
  add_common(simulate, sim);

  Overrides bch;
  bool parallel = false;
  std::vector<double> bench_hs{0.1, 0.01, 0.001};
  auto* benchcmd = app.add_subcommand("bench", "run a sweep of (system, h) cells with per-cell runtimes");
  add_common(benchcmd, bch);
  benchcmd->add_option("--hs", bench_hs, "step sizes of the sweep");
  benchcmd->add_flag("--parallel", parallel, "run cells with OpenMP");

  bool slow = false;
  bool table_parallel = false;
  auto* table = app.add_subcommand("table", "reproduce the oscillator and gas error tables");
  table->add_flag("--slow", slow, "include h = 1e-4");
  table->add_flag("--parallel", table_parallel, "run cells with OpenMP");

  std::string geo_system = "oscillator";
  std::size_t points = 100;
  std::uint64_t seed = 1;
  auto* geo = app.add_subcommand("geometry-check", "pointwise structure and field identities on random points");
  geo->add_option("--system", geo_system);
  geo->add_option("--points", points);
  geo->add_option("--seed", seed);

  Overrides conv;
  std::vector<double> conv_hs;
  auto* convergence = app.add_subcommand("convergence", "fit the order of the position error");
  add_common(convergence, conv);
  convergence->add_option("--hs", conv_hs, "step sizes (at least two)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      const auto cfg = build_config(simulate, sim);
      const auto r = bench::run_experiment(cfg);
      print_report(r);
      return first_failure(r);
    }
    if (*benchcmd) {
      auto base = build_config(benchcmd, bch);
      std::vector<bench::ExperimentConfig> cells;
      const std::vector<std::string> names =
          benchcmd->count("--system") ? std::vector<std::string>{base.system} : systems::catalog_names();
      for (const auto& name : names) {
        for (const double h : bench_hs) {
          auto c = base;
          c.system = name;
          c.h = h;
          if (!benchcmd->count("--t-final")) c.t_final = systems::by_name(name).default_t_final;
          if (!c.out_dir.empty()) c.out_dir = base.out_dir + "/" + name + "_h" + std::to_string(h);
          cells.push_back(c);
        }
      }
      const auto reports = sweep::run_cells(cells, parallel ? sweep::Execution::parallel : sweep::Execution::serial);
      int rc = 0;
      for (const auto& r : reports) {
        print_report(r);
        if (!rc) rc = first_failure(r);
      }
      return rc;
    }
    if (*table) return cmd_table(slow, table_parallel);
    if (*geo) {
      const auto e = systems::by_name(geo_system);
      const auto g = sweep::geometry_batch(e, sweep::random_phase_points(e, points, seed), sweep::Execution::serial);
      std::printf("%s, %zu points\n", geo_system.c_str(), g.points);
      std::printf("  flat vs coordinates  %.3e\n  eta(E)               %.3e\n  omega identity       %.3e\n",
                  g.flat_vs_coordinates, g.eta_of_evolution, g.omega_identity);
      std::printf("  i_R omega            %.3e\n  eta(R) - 1           %.3e\n  flat(R) - eta        %.3e\n",
                  g.reeb_omega, g.reeb_eta, g.reeb_roundtrip);
      std::printf("  contact field        %.3e\n", g.contact);
      return 0;
    }
    if (*convergence) {
      const auto cfg = build_config(convergence, conv);
      if (conv_hs.empty()) conv_hs = {0.1, 0.01, 0.001};
      const auto method = cfg.methods.size() == 1 ? cfg.methods.front() : bench::Method::variational;
      const auto res = bench::convergence_study(cfg, conv_hs, method);
      for (std::size_t i = 0; i < res.hs.size(); ++i) std::printf("h=%-10g err=%.4e\n", res.hs[i], res.errors[i]);
      std::printf("slope %.4f\n", res.slope);
      return 0;
    }
  } catch (const StepFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
