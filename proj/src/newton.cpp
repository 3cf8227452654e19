#include "thermovi/newton.hpp"

#include <string>

#include "thermovi/errors.hpp"

namespace thermovi::solve {

void validate(const NewtonConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw ConfigError("newton: tol must be positive");
  if (cfg.max_iter < 1) throw ConfigError("newton: max_iter must be >= 1");
  if (cfg.min_iter < 0 || cfg.min_iter > cfg.max_iter) throw ConfigError("newton: min_iter must lie in [0, max_iter]");
  if (!(cfg.fd_step > 0.0)) throw ConfigError("newton: fd_step must be positive");
}

Mat fd_jacobian(const ResidualFn& f, const Vec& x, double rel_step) {
  const auto n = x.size();
  Mat J;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double d = rel_step * (1.0 + std::abs(x(j)));
    Vec xp = x, xm = x;
    xp(j) += d;
    xm(j) -= d;
    const Vec col = (f(xp) - f(xm)) / (2.0 * d);
    if (j == 0) J.resize(col.size(), n);
    J.col(j) = col;
  }
  return J;
}

NewtonResult newton_solve(const ResidualFn& residual, const JacobianFn& jacobian, const Vec& x0,
                          const NewtonConfig& cfg) {
  validate(cfg);
  NewtonResult out{x0, {}};
  Vec r = residual(out.x);
  out.report.residual = max_abs(r);
  int extra = 0;
  for (int it = 0; it <= cfg.max_iter; ++it) {
    if (!r.allFinite()) throw ConvergenceError("newton: residual is not finite");
    if (out.report.residual <= cfg.tol && it >= cfg.min_iter) {
      out.report.converged = true;
      if (extra >= cfg.polish) break;
      ++extra;
    } else if (it == cfg.max_iter) {
      break;
    }
    const Mat J = jacobian ? jacobian(out.x) : fd_jacobian(residual, out.x, cfg.fd_step);
    const Vec dx = solve_dense(J, r);
    const Vec trial = out.x - dx;
    const Vec r_trial = residual(trial);
    const double res_trial = max_abs(r_trial);
    ++out.report.iterations;
    // A polishing step may only keep the iterate if it does not get worse.
    if (out.report.converged && !(res_trial <= out.report.residual)) break;
    out.x = trial;
    r = r_trial;
    out.report.residual = res_trial;
  }
  if (!out.report.converged) {
    throw ConvergenceError("newton: no convergence after " + std::to_string(cfg.max_iter) +
                           " iterations, residual " + std::to_string(out.report.residual));
  }
  return out;
}

}  // namespace thermovi::solve
