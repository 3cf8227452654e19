#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "thermovi/csv.hpp"
#include "thermovi/errors.hpp"
#include "thermovi/experiment.hpp"
#include "thermovi/reference.hpp"
#include "thermovi/sweep.hpp"
#include "thermovi/systems.hpp"

using namespace thermovi;
using namespace thermovi::bench;
namespace fs = std::filesystem;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("thermovi_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Rk2, RestStateIsFixed) {
  const auto e = systems::oscillator(0.1);
  const continuous::ThermoState x{v1(0.0), v1(0.0), 0.7};
  const auto y = reference::rk2_midpoint(e.lagrangian, x, 0.1);
  EXPECT_EQ(y.q(0), 0.0);
  EXPECT_EQ(y.v(0), 0.0);
  EXPECT_EQ(y.S, 0.7);
}

TEST(Rk2, LocalErrorIsThirdOrder) {
  const auto e = systems::oscillator(0.1);
  const auto& ex = *e.exact;
  auto err = [&](double h) { return std::abs(reference::rk2_midpoint(e.lagrangian, e.initial, h).q(0) - ex.q(e.initial, h)(0)); };
  const double ratio = err(0.02) / err(0.01);
  EXPECT_NEAR(ratio, 8.0, 0.5);
}

TEST(Rk2, DomainFailureCarriesStep) {
  const auto e = systems::ideal_gas();
  try {
    reference::rk2_integrate(e.lagrangian, {v1(0.05), v1(-10.0), 0.0}, 0.01, 100);
    FAIL() << "expected a step failure";
  } catch (const StepFailure& f) {
    EXPECT_GE(f.step(), 1u);
    EXPECT_LE(f.step(), 2u);
  }
}

TEST(Reference, MatchesExactOscillator) {
  const auto e = systems::oscillator(0.1);
  const std::size_t N = reference::steps_for(1000.0, 0.1);
  const auto tr = reference::reference_integrate(e.lagrangian, e.initial, 0.1, N);
  ASSERT_EQ(tr.states.size(), N + 1);
  double worst = 0.0;
  for (std::size_t k = 0; k <= N; ++k)
    worst = std::max(worst, std::abs(tr.states[k].q(0) - e.exact->q(e.initial, tr.times[k])(0)));
  EXPECT_LE(worst, 1e-7);
}

TEST(Reference, ZeroHorizon) {
  const auto e = systems::oscillator(0.1);
  const auto tr = reference::reference_integrate_to(e.lagrangian, e.initial, 0.0, 0.1);
  ASSERT_EQ(tr.states.size(), 1u);
  EXPECT_EQ(tr.states[0].v(0), 1.0);
  EXPECT_THROW(reference::steps_for(1.0, 0.0), ConfigError);
  EXPECT_THROW(reference::reference_integrate(e.lagrangian, e.initial, 0.1, 3, -1.0), ConfigError);
  EXPECT_THROW(reference::exact_trajectory(systems::ideal_gas(), systems::ideal_gas().initial, 0.1, 3), ConfigError);
}

TEST(Csv, Formatting) {
  EXPECT_EQ(csv::format(0.1), "0.10000000000000001");
  EXPECT_EQ(csv::format(2.0), "2");
  EXPECT_EQ(csv::format(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_EQ(csv::format(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(csv::format(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(csv::join({"a", "b", "c"}), "a,b,c");
  EXPECT_DOUBLE_EQ(std::stod(csv::format(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Config, Validation) {
  ExperimentConfig c;
  c.methods.clear();
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.h = 0.0;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.t_final = 0.001;
  EXPECT_THROW(validate(c), ConfigError);
  c = {};
  c.init_mode = "euler";
  EXPECT_THROW(validate(c), ConfigError);
  EXPECT_THROW(parse_method("rk4"), ConfigError);
  EXPECT_EQ(parse_method("midpoint"), Method::rk2);
  EXPECT_NO_THROW(validate(ExperimentConfig{}));
}

TEST(Config, LoadFile) {
  const auto dir = scratch("config");
  fs::create_directories(dir);
  const auto path = dir / "run.cfg";
  {
    std::ofstream f(path);
    f << "# comment\nsystem = van-der-waals\nh = 0.02\nt_final = 3\ngamma = 0.2\na = 500\n"
      << "q0 = 2.5\nv0 = 0\nS0 = 1\nmethods = variational, rk2\ninit_mode = taylor\nnewton_tol = 1e-11\n";
  }
  const auto c = load_config(path.string());
  EXPECT_EQ(c.system, "van-der-waals");
  EXPECT_EQ(c.h, 0.02);
  EXPECT_EQ(c.t_final, 3.0);
  EXPECT_EQ(c.params.at("gamma"), 0.2);
  EXPECT_EQ(c.params.at("a"), 500.0);
  EXPECT_EQ((*c.q0)(0), 2.5);
  EXPECT_EQ(*c.S0, 1.0);
  ASSERT_EQ(c.methods.size(), 2u);
  EXPECT_EQ(c.methods[1], Method::rk2);
  EXPECT_EQ(c.init_mode, "taylor");
  EXPECT_EQ(c.newton.tol, 1e-11);
  EXPECT_EQ(make_entry(c).lagrangian.params.at("a"), 500.0);
  {
    std::ofstream f(path);
    f << "colour = blue\n";
  }
  EXPECT_THROW(load_config(path.string()), ConfigError);
  EXPECT_THROW(load_config((dir / "missing.cfg").string()), ConfigError);
}

TEST(Experiment, OscillatorShortRun) {
  ExperimentConfig c;
  c.h = 0.1;
  c.t_final = 50.0;
  c.methods = {Method::variational, Method::rk2, Method::reference};
  const auto r = run_experiment(c);
  EXPECT_EQ(r.truth, "exact");
  const auto& v = r.get(Method::variational);
  EXPECT_FALSE(v.failed);
  EXPECT_EQ(v.steps, 500u);
  EXPECT_LT(v.max_pos_err, 1e-2);
  EXPECT_LT(v.max_H_pm_gap, 1e-12);
  EXPECT_LT(v.momentum_matching, 1e-10);
  EXPECT_TRUE(v.entropy_monotone);
  EXPECT_LT(r.get(Method::reference).max_pos_err, 1e-7);
  EXPECT_GT(r.get(Method::rk2).max_pos_err, v.max_pos_err);
}

TEST(Experiment, GasUsesReferenceTruth) {
  ExperimentConfig c;
  c.system = "ideal-gas";
  c.h = 0.01;
  c.t_final = 1.0;
  const auto r = run_experiment(c);
  EXPECT_EQ(r.truth, "reference");
  EXPECT_TRUE(r.get(Method::variational).entropy_monotone);
  EXPECT_TRUE(r.get(Method::rk2).entropy_monotone);
}

TEST(Experiment, FailureIsRecorded) {
  ExperimentConfig c;
  c.system = "ideal-gas";
  c.h = 0.5;
  c.t_final = 5.0;
  c.q0 = v1(1.0);
  c.v0 = v1(-3.0);
  c.S0 = 0.0;
  c.methods = {Method::rk2};
  const auto r = run_experiment(c);
  EXPECT_TRUE(r.get(Method::rk2).failed);
  EXPECT_GT(r.get(Method::rk2).failed_step, 0u);
  EXPECT_FALSE(r.get(Method::rk2).failure.empty());
}

TEST(Experiment, CsvIsDeterministic) {
  ExperimentConfig c;
  c.h = 0.1;
  c.t_final = 5.0;
  const auto a = scratch("csv_a"), b = scratch("csv_b");
  c.out_dir = a.string();
  run_experiment(c);
  c.out_dir = b.string();
  run_experiment(c);
  for (const std::string f : {"oscillator_variational_h0.1.csv", "oscillator_rk2_h0.1.csv"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    const auto text = slurp(a / f);
    EXPECT_EQ(text, slurp(b / f));
    EXPECT_EQ(text.substr(0, text.find('\n')), "t,q_1,v_1,S,H_plus,H_minus,H_vel");
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 52);
  }
  const auto summary = slurp(a / "summary.csv");
  EXPECT_EQ(summary.substr(0, summary.find('\n')), "system,method,h,max_pos_err,max_S_err,max_H_dev");
  EXPECT_EQ(summary, slurp(b / "summary.csv"));
}

TEST(Convergence, Slope) {
  EXPECT_NEAR(loglog_slope({0.1, 0.01, 0.001}, {3e-3, 3e-5, 3e-7}), 2.0, 1e-12);
  ExperimentConfig c;
  c.t_final = 20.0;
  EXPECT_THROW(convergence_study(c, {0.1}), ConfigError);
  const auto r = convergence_study(c, {0.1, 0.05, 0.025});
  EXPECT_EQ(r.errors.size(), 3u);
  EXPECT_NEAR(r.slope, 2.0, 0.1);
}

TEST(Sweep, SerialMatchesParallel) {
  auto cells = sweep::oscillator_table_cells({0.1, 0.05}, 0.1, 20.0);
  ExperimentConfig g;
  g.system = "two-pistons";
  g.h = 0.01;
  g.t_final = 2.0;
  cells.push_back(g);
  const auto s = sweep::run_cells(cells, sweep::Execution::serial);
  const auto p = sweep::run_cells(cells, sweep::Execution::parallel);
  ASSERT_EQ(s.size(), p.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].h, p[i].h);
    for (std::size_t m = 0; m < s[i].methods.size(); ++m) {
      EXPECT_EQ(s[i].methods[m].max_pos_err, p[i].methods[m].max_pos_err);
      EXPECT_EQ(s[i].methods[m].max_S_err, p[i].methods[m].max_S_err);
    }
  }
  const auto e = systems::van_der_waals();
  const auto pts = sweep::random_phase_points(e, 500, 3);
  const auto gs = sweep::geometry_batch(e, pts, sweep::Execution::serial);
  const auto gp = sweep::geometry_batch(e, pts, sweep::Execution::parallel);
  EXPECT_EQ(gs.flat_vs_coordinates, gp.flat_vs_coordinates);
  EXPECT_EQ(gs.contact, gp.contact);
  const auto d = discrete::midpoint_discretize(systems::oscillator().lagrangian, 0.1);
  const auto ts = sweep::random_triples(systems::oscillator(), 0.1, 40, 5);
  EXPECT_EQ(sweep::pullback_batch(d, ts, sweep::Execution::serial),
            sweep::pullback_batch(d, ts, sweep::Execution::parallel));
}

TEST(Sweep, RandomDrawsAreSeeded) {
  const auto e = systems::two_pistons();
  const auto a = sweep::random_phase_points(e, 10, 9), b = sweep::random_phase_points(e, 10, 9);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].q, b[i].q);
    EXPECT_GE(a[i].q(0), e.box.q_lo);
    EXPECT_LE(a[i].q(0), e.box.q_hi);
  }
  EXPECT_NE(sweep::random_phase_points(e, 1, 10)[0].q, a[0].q);
}
