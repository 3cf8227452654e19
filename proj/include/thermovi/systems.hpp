#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thermovi/continuous.hpp"
#include "thermovi/geometry.hpp"

namespace thermovi::systems {

using continuous::ThermoState;

using HamiltonianFn = std::function<double(const Vec& q, const Vec& p, double S)>;
using HamiltonianCovectorFn = std::function<Vec(const Vec& q, const Vec& p, double S)>;

/// Exact solution from an initial state (q, v, S) at t = 0. Entropy is given
/// through its rate so callers can integrate it by quadrature.
struct ExactSolution {
  std::function<Vec(const ThermoState& init, double t)> q;
  std::function<Vec(const ThermoState& init, double t)> v;
  std::function<double(const ThermoState& init, double t)> Sdot;
};

/// q_{k+1} = a q_k - b q_{k-1}.
struct LinearRecurrence {
  double a = 0.0;
  double b = 0.0;
  Vec next(const Vec& q_prev, const Vec& q_curr) const { return a * q_curr - b * q_prev; }
};

/// Box used to sample random in-domain states for property checks.
struct SampleBox {
  double q_lo, q_hi, v_lo, v_hi, S_lo, S_hi;
};

struct SystemCatalogEntry {
  continuous::LagrangianThermoSystem lagrangian;
  HamiltonianFn H;
  HamiltonianCovectorFn dH;        // (dH/dq, dH/dp, dH/dS)
  HamiltonianCovectorFn friction;  // F^fr on T*Q x R
  ThermoState initial;             // default (q0, v0, S0)
  double default_h = 0.01;
  double default_t_final = 10.0;
  std::string default_init_mode = "hold";
  SampleBox box{};
  std::optional<ExactSolution> exact;
  std::function<LinearRecurrence(double h)> closed_form;  // empty if none
  std::function<double(const ThermoState&)> cartan;       // empty if none

  const std::string& name() const { return lagrangian.name; }
  int n() const { return lagrangian.n; }
};

SystemCatalogEntry oscillator(double gamma = 0.1);
SystemCatalogEntry ideal_gas(double gamma = 0.1, double c = 1.5);
SystemCatalogEntry van_der_waals(double gamma = 0.1, double a_hat = 1000.0, double b_hat = 0.1);
SystemCatalogEntry two_pistons(double gamma = 0.1);
SystemCatalogEntry two_pistons_frictionless();

/// "oscillator", "ideal-gas", "van-der-waals", "two-pistons". Throws ConfigError.
SystemCatalogEntry by_name(const std::string& name, double gamma = 0.1);
std::vector<std::string> catalog_names();

/// Coefficients of the explicit oscillator recurrence obtained from the
/// midpoint scheme.
LinearRecurrence oscillator_recurrence(double gamma, double h);
/// The same recurrence with b = (4 + h^2 - 4 h gamma) / (4 + h (h + 2 gamma)).
LinearRecurrence oscillator_recurrence_printed(double gamma, double h);

/// Two-piston quantity gamma (x - y) + v_y - v_x.
double two_piston_g_printed(double gamma, const ThermoState& x);
/// gamma (x - y) + v_x - v_y, conserved by the frictional two-piston flow.
double two_piston_g(double gamma, const ThermoState& x);

/// Hamiltonian-side data at (q, p, S), with zero external force.
geometry::HamiltonianPoint hamiltonian_point(const SystemCatalogEntry& e, const Vec& q, const Vec& p, double S);

}  // namespace thermovi::systems
