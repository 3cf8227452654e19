#pragma once

#include <cstddef>

#include "thermovi/continuous.hpp"
#include "thermovi/systems.hpp"

namespace thermovi::reference {

using continuous::LagrangianThermoSystem;
using continuous::ThermoState;
using continuous::Trajectory;

/// Explicit midpoint step y + h f(y + h/2 f(y)) on (q, v, S).
ThermoState rk2_midpoint(const LagrangianThermoSystem& sys, const ThermoState& x, double h);

/// N steps of rk2_midpoint. Domain failures are rethrown as StepFailure.
Trajectory rk2_integrate(const LagrangianThermoSystem& sys, const ThermoState& x0, double h, std::size_t N);

/// Adaptive Dormand-Prince 4(5) with dense output, sampled on t_k = k h for
/// k = 0..N.
Trajectory reference_integrate(const LagrangianThermoSystem& sys, const ThermoState& x0, double h, std::size_t N,
                               double rtol = 1e-10, double atol = 1e-10);

/// Same, with N = round(t_final / h).
Trajectory reference_integrate_to(const LagrangianThermoSystem& sys, const ThermoState& x0, double t_final, double h,
                                  double rtol = 1e-10, double atol = 1e-10);

/// Exact solution on the grid; the entropy is S0 plus Gauss-Kronrod quadrature
/// of the exact rate over each grid interval. Throws ConfigError without an
/// exact solution.
Trajectory exact_trajectory(const systems::SystemCatalogEntry& e, const ThermoState& x0, double h, std::size_t N);

/// Integral of the exact entropy rate over [a, b] (adaptive Gauss-Kronrod).
double exact_entropy_increment(const systems::ExactSolution& ex, const ThermoState& x0, double a, double b);

/// Number of steps of size h that fit in t_final (rounded).
std::size_t steps_for(double t_final, double h);

}  // namespace thermovi::reference
