#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "thermovi/discrete.hpp"
#include "thermovi/integrate.hpp"
#include "thermovi/newton.hpp"
#include "thermovi/systems.hpp"

namespace thermovi::bench {

enum class Method { variational, rk2, reference };

Method parse_method(const std::string& s);
std::string to_string(Method m);

struct ExperimentConfig {
  std::string system = "oscillator";
  std::map<std::string, double> params;  // gamma, c, a, b
  double h = 0.01;
  double t_final = 1000.0;
  std::optional<Vec> q0, v0, q1;  // q1 overrides the init mode
  std::optional<double> S0;
  std::string init_mode;  // empty: system default
  std::vector<Method> methods{Method::variational, Method::rk2};
  std::string out_dir;  // empty: no files
  std::size_t entropy_window = 1500;
  solve::NewtonConfig newton;
};

/// Throws ConfigError on h <= 0, t_final < h, empty methods or a bad init mode.
void validate(const ExperimentConfig& cfg);

/// Reads `key = value` lines (# comments). Keys: system, h, t_final, gamma, c,
/// a, b, q0, v0, q1, S0, init_mode, methods, out, entropy_window, newton_tol,
/// newton_max_iter. Vectors and lists are comma separated.
ExperimentConfig load_config(const std::string& path);

/// Builds the catalog entry named by the config with its parameter overrides.
systems::SystemCatalogEntry make_entry(const ExperimentConfig& cfg);

/// H+_k = H(q_k, p+(k-1), S_k), H-_k = H(q_{k-1}, p-(k-1), S_{k-1}),
/// Hv_k = H(q_k, (q_k - q_{k-1})/h, S_k) for k = 1..N. Index 0 is NaN.
struct HamiltonianSeries {
  std::vector<double> plus, minus, vel;
};

HamiltonianSeries hamiltonian_estimates(const systems::SystemCatalogEntry& e, const discrete::DiscreteThermoSystem& d,
                                        const discrete::DiscretePath& path);

struct MethodReport {
  Method method = Method::variational;
  std::size_t steps = 0;
  double max_pos_err = 0.0;
  double max_S_err = 0.0;
  double max_S_err_window = 0.0;  // first entropy_window grid points
  double max_H_dev = 0.0;         // H+ for variational, H(q, v, S) otherwise
  double max_H_minus_dev = 0.0;   // variational only
  double max_H_vel_dev = 0.0;     // velocity-difference estimator
  double max_H_pm_gap = 0.0;      // max |H+ - H-|, variational only
  double momentum_matching = 0.0; // variational only
  double max_newton_residual = 0.0;
  int max_newton_iterations = 0;
  bool entropy_monotone = true;
  double seconds = 0.0;
  bool failed = false;
  std::size_t failed_step = 0;
  std::string failure;
};

struct ErrorReport {
  std::string system;
  double h = 0.0;
  double t_final = 0.0;
  std::string truth;  // "exact" or "reference"
  std::vector<MethodReport> methods;

  const MethodReport& get(Method m) const;
};

/// Runs every configured method against the exact solution (or the adaptive
/// reference when none exists). Failures are recorded in the report, not
/// thrown. When out_dir is set, writes <system>_<method>_h<h>.csv per method
/// and summary.csv.
ErrorReport run_experiment(const ExperimentConfig& cfg);

struct ConvergenceResult {
  std::vector<double> hs;
  std::vector<double> errors;
  double slope = 0.0;
};

/// Least-squares slope of log(error) against log(h).
double loglog_slope(const std::vector<double>& hs, const std::vector<double>& errors);

/// Max position error for each h and the fitted order. Throws ConfigError
/// with fewer than two step sizes.
ConvergenceResult convergence_study(const ExperimentConfig& base, const std::vector<double>& hs,
                                    Method method = Method::variational);

}  // namespace thermovi::bench
