#include "thermovi/continuous.hpp"

#include <cmath>
#include <limits>

#include "thermovi/errors.hpp"

namespace thermovi::continuous {

namespace {

double fd_step(double x) { return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + std::abs(x)); }

enum class Slot { q, v, S };

ThermoState shifted(const ThermoState& x, Slot slot, int j, double d) {
  ThermoState y = x;
  switch (slot) {
    case Slot::q: y.q(j) += d; break;
    case Slot::v: y.v(j) += d; break;
    case Slot::S: y.S += d; break;
  }
  return y;
}

double coord(const ThermoState& x, Slot slot, int j) {
  switch (slot) {
    case Slot::q: return x.q(j);
    case Slot::v: return x.v(j);
    case Slot::S: return x.S;
  }
  return 0.0;
}

// Columns j: d f / d (slot_j), central differences.
Mat fd_jacobian(const CovectorFn& f, const ThermoState& x, Slot slot) {
  const int n = x.n();
  const int cols = slot == Slot::S ? 1 : n;
  Mat J(n, cols);
  for (int j = 0; j < cols; ++j) {
    const double d = fd_step(coord(x, slot, j));
    J.col(j) = (f(shifted(x, slot, j, d)) - f(shifted(x, slot, j, -d))) / (2.0 * d);
  }
  return J;
}

}  // namespace

VectorFieldQ constant_field(const Vec& X) {
  const auto n = X.size();
  return VectorFieldQ{[X](const Vec&) { return X; }, [n](const Vec&) { return Mat(Mat::Zero(n, n)); }};
}

double energy(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return x.v.dot(sys.dLdv(x)) - sys.L(x);
}

double temperature(const LagrangianThermoSystem& sys, const ThermoState& x) { return -sys.dLdS(x); }

Vec external_force(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.external ? sys.external(x) : Vec(Vec::Zero(x.n()));
}

Mat hessian_qq(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.d2Ldq2 ? sys.d2Ldq2(x) : fd_jacobian(sys.dLdq, x, Slot::q);
}

Mat hessian_qv(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.d2Ldqdv ? sys.d2Ldqdv(x) : fd_jacobian(sys.dLdq, x, Slot::v);
}

Mat hessian_vv(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.d2Ldv2 ? sys.d2Ldv2(x) : fd_jacobian(sys.dLdv, x, Slot::v);
}

Vec mixed_qS(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.d2LdqdS ? sys.d2LdqdS(x) : Vec(fd_jacobian(sys.dLdq, x, Slot::S).col(0));
}

Vec mixed_vS(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.d2LdvdS ? sys.d2LdvdS(x) : Vec(fd_jacobian(sys.dLdv, x, Slot::S).col(0));
}

Mat friction_dq(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.dFdq ? sys.dFdq(x) : fd_jacobian(sys.friction, x, Slot::q);
}

Mat friction_dv(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.dFdv ? sys.dFdv(x) : fd_jacobian(sys.friction, x, Slot::v);
}

Vec friction_dS(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return sys.dFdS ? sys.dFdS(x) : Vec(fd_jacobian(sys.friction, x, Slot::S).col(0));
}

Rhs generic_rhs(const LagrangianThermoSystem& sys, const ThermoState& x) {
  if (sys.guard) sys.guard(x);
  const double LS = sys.dLdS(x);
  if (LS == 0.0) throw TemperatureDegenerateError("continuous_rhs: dL/dS vanishes");
  const Vec F = sys.friction(x);
  const double Sdot = x.v.dot(F) / LS;
  // d/dt(dL/dv) = Lvv a + Lvq v + LvS Sdot = Lq + F + Fext
  const Mat Lvq = hessian_qv(sys, x).transpose();
  const Vec rhs = sys.dLdq(x) + F + external_force(sys, x) - Lvq * x.v - mixed_vS(sys, x) * Sdot;
  Rhs out;
  out.qdot = x.v;
  try {
    out.vdot = solve_dense(hessian_vv(sys, x), rhs);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("continuous_rhs: velocity Hessian is singular");
  }
  out.Sdot = Sdot;
  return out;
}

Rhs continuous_rhs(const LagrangianThermoSystem& sys, const ThermoState& x) {
  if (!sys.acceleration) return generic_rhs(sys, x);
  if (sys.guard) sys.guard(x);
  const double LS = sys.dLdS(x);
  if (LS == 0.0) throw TemperatureDegenerateError("continuous_rhs: dL/dS vanishes");
  Rhs out;
  out.qdot = x.v;
  out.vdot = sys.acceleration(x);
  out.Sdot = x.v.dot(sys.friction(x)) / LS;
  return out;
}

LegendreImage legendre(const LagrangianThermoSystem& sys, const ThermoState& x) {
  return LegendreImage{x.q, sys.dLdv(x), x.S};
}

double noether_quantity(const LagrangianThermoSystem& sys, const VectorFieldQ& X, const ThermoState& x) {
  return sys.dLdv(x).dot(X.value(x.q));
}

NoetherCheck noether_lift_check(const LagrangianThermoSystem& sys, const VectorFieldQ& X,
                                const std::vector<ThermoState>& samples, double tol) {
  NoetherCheck out;
  for (const auto& x : samples) {
    const Vec Xq = X.value(x.q);
    const Vec Xv = X.jacobian(x.q) * x.v;  // v^j dX^i/dq^j
    const double XcL = sys.dLdq(x).dot(Xq) + sys.dLdv(x).dot(Xv);
    // Forces are semibasic, so only the dq part of X^C contributes.
    const double force = (sys.friction(x) + external_force(sys, x)).dot(Xq);
    out.max_defect = std::max(out.max_defect, std::abs(XcL + force));
  }
  out.holds = out.max_defect <= tol;
  return out;
}

double conserved_along(const Trajectory& traj, const std::function<double(const ThermoState&)>& g) {
  if (traj.states.empty()) return 0.0;
  const double g0 = g(traj.states.front());
  double drift = 0.0;
  for (const auto& x : traj.states) drift = std::max(drift, std::abs(g(x) - g0));
  return drift;
}

}  // namespace thermovi::continuous
