#pragma once

// Discrete variational machinery on Q x Q x R with Q = R^n in linear
// coordinates. A point (q0, q1, S0) is a DiscreteTriple; a discrete
// Lagrangian L_d and the discrete friction covectors f^- (acting on dq0) and
// f^+ (acting on dq1) define the system.
//
// Derivative matrices follow one convention: for a covector-valued g,
// D1g(i, j) = dg_i/dq0_j and D2g(i, j) = dg_i/dq1_j.

#include <functional>
#include <vector>

#include "thermovi/continuous.hpp"
#include "thermovi/linalg.hpp"
#include "thermovi/newton.hpp"

namespace thermovi::discrete {

struct DiscreteTriple {
  Vec q0;
  Vec q1;
  double S0 = 0.0;

  int n() const { return static_cast<int>(q0.size()); }
};

using ScalarFn = std::function<double(const DiscreteTriple&)>;
using CovectorFn = std::function<Vec(const DiscreteTriple&)>;
using MatrixFn = std::function<Mat(const DiscreteTriple&)>;

/// Second partials of L_d and f^±. Entries may be empty; second_partials()
/// fills the gaps by central differences of the first partials.
struct SecondPartials {
  MatrixFn D1D1Ld;  // d(D1Ld)/dq0
  MatrixFn D2D1Ld;  // d(D1Ld)/dq1
  MatrixFn D1D2Ld;  // d(D2Ld)/dq0
  MatrixFn D2D2Ld;  // d(D2Ld)/dq1
  CovectorFn DSD1Ld;
  CovectorFn DSD2Ld;
  MatrixFn D1ffr_minus, D2ffr_minus, D1ffr_plus, D2ffr_plus;
  CovectorFn DSffr_minus, DSffr_plus;
};

struct DiscreteThermoSystem {
  int n = 1;
  double h = 0.0;
  ScalarFn Ld;
  CovectorFn D1Ld;
  CovectorFn D2Ld;
  ScalarFn DSLd;
  CovectorFn ffr_minus;
  CovectorFn ffr_plus;
  SecondPartials second;
  std::function<void(const DiscreteTriple&)> guard;  // throws DomainError
};

/// Evaluated second partials at one triple.
struct SecondPartialValues {
  Mat D1D1Ld, D2D1Ld, D1D2Ld, D2D2Ld;
  Vec DSD1Ld, DSD2Ld;
  Mat D1fm, D2fm, D1fp, D2fp;
  Vec DSfm, DSfp;
};

SecondPartialValues second_partials(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// L_d(q0, q1, S0) = L((q0+q1)/2, (q1-q0)/h, S0); both friction covectors are
/// F~^fr at that midpoint state. Throws ConfigError for h <= 0.
DiscreteThermoSystem midpoint_discretize(const continuous::LagrangianThermoSystem& sys, double h);

/// S1 = S0 + (f^+ . q1 - f^- . q0) / D_S L_d. Throws TemperatureDegenerateError
/// when D_S L_d = 0.
double entropy_update(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// D1Ld(q_curr,q_next,S_curr) + f^-/2 + D2Ld(q_prev,q_curr,S_prev) + f^+/2.
Vec del_residual(const DiscreteThermoSystem& d, const Vec& q_prev, const Vec& q_curr, double S_prev,
                 const Vec& q_next, double S_curr);

/// Same formula under the name used for the differential of the action.
Vec ddel_map(const DiscreteThermoSystem& d, const Vec& q_prev, const Vec& q_curr, const Vec& q_next,
             double S_prev, double S_curr);

/// A point (q, p, S) of T*Q x R.
struct CotangentPoint {
  Vec q;
  Vec p;
  double S = 0.0;
};

/// (q1, D2Ld + f^+/2, entropy_update(t)).
CotangentPoint legendre_plus(const DiscreteThermoSystem& d, const DiscreteTriple& t);
/// (q0, -D1Ld - f^-/2, S0).
CotangentPoint legendre_minus(const DiscreteThermoSystem& d, const DiscreteTriple& t);

struct DiscreteMomenta {
  Vec p_minus;
  Vec p_plus;
};

/// h-scaled second components of the Legendre transforms.
DiscreteMomenta discrete_momenta(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// One application of the discrete flow: (q0, q1, S0) -> (q1, q2, S1), with
/// q2 the Newton root of h^2 * del_residual warm-started at 2 q1 - q0.
DiscreteTriple discrete_flow(const DiscreteThermoSystem& d, const DiscreteTriple& t,
                             const solve::NewtonConfig& cfg = {}, solve::StepReport* report = nullptr);

struct OmegaMatrices {
  Mat Wplus;   // D1D2Ld + D1f^+/2
  Mat Wminus;  // D2D1Ld + D2f^-/2
};

OmegaMatrices omega_matrices(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// -D2D1Ld - D2f^-/2; invertible iff the minus Legendre map is a local
/// diffeomorphism. Its negative is the Newton Jacobian in q_next.
Mat semiregularity_matrix(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// (2n+1)x(2n+1) matrices of (F^{f±}L_d)^* omega in (q0, q1, S) coordinates,
/// built from the analytic (or FD) Jacobians of the Legendre maps.
Mat pulled_back_form_plus(const DiscreteThermoSystem& d, const DiscreteTriple& t);
Mat pulled_back_form_minus(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// Central-difference Jacobian of discrete_flow at t.
Mat flow_jacobian(const DiscreteThermoSystem& d, const DiscreteTriple& t, const solve::NewtonConfig& cfg);

/// max |J^T Omega^-(Phi(t)) J - Omega^+(t)|.
double pullback_check(const DiscreteThermoSystem& d, const DiscreteTriple& t, const solve::NewtonConfig& cfg = {});

enum class Side { plus, minus };

/// <p^+, xi(q1)> or <p^-, xi(q0)>.
double momentum_map(const DiscreteThermoSystem& d, const DiscreteTriple& t, const continuous::VectorFieldQ& xi,
                    Side side);

struct NoetherCondition {
  bool holds = false;
  double max_defect = 0.0;
};

/// Tests xi(L_d) + (f^- . xi(q0) + f^+ . xi(q1))/2 = 0 on the samples.
NoetherCondition noether_condition(const DiscreteThermoSystem& d, const continuous::VectorFieldQ& xi,
                                   const std::vector<DiscreteTriple>& samples, double tol = 1e-10);

/// h, q_0..q_N and S_0..S_N.
struct DiscretePath {
  double h = 0.0;
  std::vector<Vec> qs;
  std::vector<double> Ss;

  std::size_t steps() const { return qs.empty() ? 0 : qs.size() - 1; }
  DiscreteTriple triple(std::size_t k) const { return {qs[k], qs[k + 1], Ss[k]}; }
};

/// Largest relative violation of the entropy-update constraint along the path.
double path_constraint_residual(const DiscreteThermoSystem& d, const DiscretePath& path);

/// Sum of L_d over the segments. Throws ConfigError if the path violates the
/// entropy constraint by more than 1e-12 relative.
double discrete_action(const DiscreteThermoSystem& d, const DiscretePath& path);

struct BoundaryForms {
  Vec theta_minus;  // -(D1Ld + f^-/2), on dq0
  Vec theta_plus;   // D2Ld + f^+/2, on dq1
};

BoundaryForms boundary_forms(const DiscreteThermoSystem& d, const DiscreteTriple& t);

/// max over k of |p^+(k-1) - p^-(k)| (h-scaled momenta) along the path.
double momentum_matching_residual(const DiscreteThermoSystem& d, const DiscretePath& path);

}  // namespace thermovi::discrete
