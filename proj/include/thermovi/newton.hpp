#pragma once

#include <cmath>
#include <functional>
#include <limits>

#include "thermovi/linalg.hpp"

namespace thermovi::solve {

struct NewtonConfig {
  double tol = 1e-12;  // absolute, max-norm of the residual
  int max_iter = 50;
  double fd_step = std::cbrt(std::numeric_limits<double>::epsilon());  // relative
  int min_iter = 1;  // corrections applied even if the start already meets tol
  int polish = 0;  // extra iterations after convergence (used by FD Jacobians of the flow)
};

struct StepReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

struct NewtonResult {
  Vec x;
  StepReport report;
};

using ResidualFn = std::function<Vec(const Vec&)>;
using JacobianFn = std::function<Mat(const Vec&)>;

void validate(const NewtonConfig& cfg);

/// Central-difference Jacobian with step fd_step * (1 + |x_j|).
Mat fd_jacobian(const ResidualFn& f, const Vec& x, double rel_step);

/// Undamped Newton iteration from x0. An empty jacobian selects the FD
/// fallback. Throws ConvergenceError after max_iter and SingularMatrixError
/// on a singular Jacobian.
NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, const Vec& x0,
                          const NewtonConfig& cfg = {});

}  // namespace thermovi::solve
