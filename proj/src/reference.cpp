#include "thermovi/reference.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "thermovi/errors.hpp"

namespace thermovi::reference {

namespace {

ThermoState axpy(const ThermoState& x, double a, const continuous::Rhs& f) {
  return {x.q + a * f.qdot, x.v + a * f.vdot, x.S + a * f.Sdot};
}

using Flat = std::vector<double>;

Flat pack(const ThermoState& x) {
  const int n = x.n();
  Flat y(2 * n + 1);
  for (int i = 0; i < n; ++i) {
    y[i] = x.q(i);
    y[n + i] = x.v(i);
  }
  y[2 * n] = x.S;
  return y;
}

ThermoState unpack(const Flat& y, int n) {
  ThermoState x{Vec(n), Vec(n), y[2 * n]};
  for (int i = 0; i < n; ++i) {
    x.q(i) = y[i];
    x.v(i) = y[n + i];
  }
  return x;
}

}  // namespace

std::size_t steps_for(double t_final, double h) {
  if (!(h > 0.0)) throw ConfigError("time step must be positive");
  if (t_final < 0.0) throw ConfigError("t_final must be nonnegative");
  return static_cast<std::size_t>(std::llround(t_final / h));
}

ThermoState rk2_midpoint(const LagrangianThermoSystem& sys, const ThermoState& x, double h) {
  const auto k1 = continuous::continuous_rhs(sys, x);
  const auto k2 = continuous::continuous_rhs(sys, axpy(x, 0.5 * h, k1));
  return axpy(x, h, k2);
}

Trajectory rk2_integrate(const LagrangianThermoSystem& sys, const ThermoState& x0, double h, std::size_t N) {
  Trajectory tr;
  tr.h = h;
  tr.times.reserve(N + 1);
  tr.states.reserve(N + 1);
  tr.times.push_back(0.0);
  tr.states.push_back(x0);
  for (std::size_t k = 1; k <= N; ++k) {
    try {
      tr.states.push_back(rk2_midpoint(sys, tr.states.back(), h));
    } catch (const Error& e) {
      throw StepFailure(k, e.what());
    }
    if (!tr.states.back().finite()) throw StepFailure(k, "rk2: non-finite state");
    tr.times.push_back(static_cast<double>(k) * h);
  }
  return tr;
}

Trajectory reference_integrate(const LagrangianThermoSystem& sys, const ThermoState& x0, double h, std::size_t N,
                               double rtol, double atol) {
  namespace ode = boost::numeric::odeint;
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("reference: tolerances must be positive");
  if (!(h > 0.0)) throw ConfigError("reference: grid step must be positive");
  const int n = x0.n();
  Trajectory tr;
  tr.h = h;
  tr.times.resize(N + 1);
  for (std::size_t k = 0; k <= N; ++k) tr.times[k] = static_cast<double>(k) * h;
  tr.states.reserve(N + 1);
  if (N == 0) {
    tr.states.push_back(x0);
    return tr;
  }

  auto rhs = [&sys, n](const Flat& y, Flat& dy, double) {
    const auto f = continuous::continuous_rhs(sys, unpack(y, n));
    for (int i = 0; i < n; ++i) {
      dy[i] = f.qdot(i);
      dy[n + i] = f.vdot(i);
    }
    dy[2 * n] = f.Sdot;
  };
  auto observer = [&tr, n](const Flat& y, double) { tr.states.push_back(unpack(y, n)); };

  Flat y = pack(x0);
  auto stepper = ode::make_dense_output(atol, rtol, ode::runge_kutta_dopri5<Flat>());
  try {
    ode::integrate_times(stepper, rhs, y, tr.times.begin(), tr.times.end(), 0.1 * h, observer);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw ConvergenceError(std::string("reference: ") + e.what());
  }
  for (const auto& s : tr.states) {
    if (!s.finite()) throw ConvergenceError("reference: non-finite state");
  }
  return tr;
}

Trajectory reference_integrate_to(const LagrangianThermoSystem& sys, const ThermoState& x0, double t_final, double h,
                                  double rtol, double atol) {
  return reference_integrate(sys, x0, h, steps_for(t_final, h), rtol, atol);
}

double exact_entropy_increment(const systems::ExactSolution& ex, const ThermoState& x0, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  auto rate = [&](double t) { return ex.Sdot(x0, t); };
  // The error estimate bottoms out near 1e-16 absolute, so a purely relative
  // tolerance never terminates where the rate is small.
  double err = 0.0, L1 = 0.0;
  const double once = GK::integrate(rate, a, b, 0, 0.0, &err, &L1);
  if (err <= std::max(1e-12 * L1, 1e-15)) return once;
  return GK::integrate(rate, a, b, 6, 1e-12);
}

Trajectory exact_trajectory(const systems::SystemCatalogEntry& e, const ThermoState& x0, double h, std::size_t N) {
  if (!e.exact) throw ConfigError(e.name() + ": no exact solution");
  const auto& ex = *e.exact;
  Trajectory tr;
  tr.h = h;
  tr.times.reserve(N + 1);
  tr.states.reserve(N + 1);
  long double S = x0.S;
  for (std::size_t k = 0; k <= N; ++k) {
    const double t = static_cast<double>(k) * h;
    if (k > 0) {
      const double t0 = static_cast<double>(k - 1) * h;
      S += exact_entropy_increment(ex, x0, t0, t);
    }
    tr.times.push_back(t);
    tr.states.push_back({ex.q(x0, t), ex.v(x0, t), static_cast<double>(S)});
  }
  return tr;
}

}  // namespace thermovi::reference
