#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "thermovi/linalg.hpp"

namespace thermovi::continuous {

/// A point (q, v, S) of TQ x R.
struct ThermoState {
  Vec q;
  Vec v;
  double S = 0.0;

  int n() const { return static_cast<int>(q.size()); }
  bool finite() const { return q.allFinite() && v.allFinite() && std::isfinite(S); }
};

using ScalarFn = std::function<double(const ThermoState&)>;
using CovectorFn = std::function<Vec(const ThermoState&)>;
using MatrixFn = std::function<Mat(const ThermoState&)>;

/// Continuous Lagrangian thermodynamic system. First partials are required;
/// second partials and the closed-form acceleration are optional (empty
/// std::function) and fall back to central finite differences / the
/// generic Hessian solve.
struct LagrangianThermoSystem {
  std::string name;
  int n = 1;
  std::map<std::string, double> params;

  ScalarFn L;
  CovectorFn dLdq;
  CovectorFn dLdv;
  ScalarFn dLdS;
  CovectorFn friction;  // F~^fr_i
  CovectorFn external;  // F~^ext_i, empty means zero

  MatrixFn d2Ldq2;   // d2L/dq_i dq_j
  MatrixFn d2Ldqdv;  // d2L/dq_i dv_j
  MatrixFn d2Ldv2;   // d2L/dv_i dv_j
  CovectorFn d2LdqdS;
  CovectorFn d2LdvdS;
  MatrixFn dFdq;  // dF_i/dq_j
  MatrixFn dFdv;  // dF_i/dv_j
  CovectorFn dFdS;

  CovectorFn acceleration;                        // closed-form qddot
  std::function<void(const ThermoState&)> guard;  // throws DomainError
};

struct Rhs {
  Vec qdot;
  Vec vdot;
  double Sdot = 0.0;
};

struct Trajectory {
  double h = 0.0;
  std::vector<double> times;
  std::vector<ThermoState> states;
};

/// A vector field X on Q with its Jacobian dX^i/dq^j.
struct VectorFieldQ {
  std::function<Vec(const Vec&)> value;
  std::function<Mat(const Vec&)> jacobian;
};

VectorFieldQ constant_field(const Vec& X);

double energy(const LagrangianThermoSystem& sys, const ThermoState& x);
double temperature(const LagrangianThermoSystem& sys, const ThermoState& x);
Vec external_force(const LagrangianThermoSystem& sys, const ThermoState& x);

/// Right-hand side of the thermodynamic Euler-Lagrange equations. Uses the
/// system's closed-form acceleration when present.
Rhs continuous_rhs(const LagrangianThermoSystem& sys, const ThermoState& x);

/// Same equations through the velocity-Hessian solve, ignoring any closed form.
Rhs generic_rhs(const LagrangianThermoSystem& sys, const ThermoState& x);

/// (q, dL/dv, S).
struct LegendreImage {
  Vec q;
  Vec p;
  double S = 0.0;
};
LegendreImage legendre(const LagrangianThermoSystem& sys, const ThermoState& x);

// Second partials with finite-difference fallback (step cbrt(eps)(1+|x|)).
Mat hessian_qq(const LagrangianThermoSystem& sys, const ThermoState& x);
Mat hessian_qv(const LagrangianThermoSystem& sys, const ThermoState& x);
Mat hessian_vv(const LagrangianThermoSystem& sys, const ThermoState& x);
Vec mixed_qS(const LagrangianThermoSystem& sys, const ThermoState& x);
Vec mixed_vS(const LagrangianThermoSystem& sys, const ThermoState& x);
Mat friction_dq(const LagrangianThermoSystem& sys, const ThermoState& x);
Mat friction_dv(const LagrangianThermoSystem& sys, const ThermoState& x);
Vec friction_dS(const LagrangianThermoSystem& sys, const ThermoState& x);

struct NoetherCheck {
  bool holds = false;
  double max_defect = 0.0;  // max |X^C(L) + (F^fr + F^ext)(X^C)|
};

/// Tests X^C(L) = -(F^fr + F^ext)(X^C) on the samples to 1e-10. When it
/// holds, noether_quantity(sys, X, .) is conserved.
NoetherCheck noether_lift_check(const LagrangianThermoSystem& sys, const VectorFieldQ& X,
                                const std::vector<ThermoState>& samples, double tol = 1e-10);

/// X^V(L) = dL/dv . X(q).
double noether_quantity(const LagrangianThermoSystem& sys, const VectorFieldQ& X, const ThermoState& x);

/// max_t |g(x_t) - g(x_0)|.
double conserved_along(const Trajectory& traj, const std::function<double(const ThermoState&)>& g);

}  // namespace thermovi::continuous
