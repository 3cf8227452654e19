#include "thermovi/discrete.hpp"

#include <cmath>
#include <limits>
#include <memory>

#include "thermovi/errors.hpp"

namespace thermovi::discrete {

using continuous::LagrangianThermoSystem;
using continuous::ThermoState;

namespace {

double fd_step(double x) { return std::cbrt(std::numeric_limits<double>::epsilon()) * (1.0 + std::abs(x)); }

enum class Slot { q0, q1, S };

// Central-difference derivative of a covector function w.r.t. one slot.
Mat fd_partial(const CovectorFn& g, const DiscreteTriple& t, Slot slot) {
  const int n = t.n();
  const int cols = slot == Slot::S ? 1 : n;
  Mat J(n, cols);
  for (int j = 0; j < cols; ++j) {
    DiscreteTriple tp = t, tm = t;
    double d = 0.0;
    switch (slot) {
      case Slot::q0: d = fd_step(t.q0(j)); tp.q0(j) += d; tm.q0(j) -= d; break;
      case Slot::q1: d = fd_step(t.q1(j)); tp.q1(j) += d; tm.q1(j) -= d; break;
      case Slot::S: d = fd_step(t.S0); tp.S0 += d; tm.S0 -= d; break;
    }
    J.col(j) = (g(tp) - g(tm)) / (2.0 * d);
  }
  return J;
}

Mat partial_or_fd(const MatrixFn& analytic, const CovectorFn& g, const DiscreteTriple& t, Slot slot) {
  return analytic ? analytic(t) : fd_partial(g, t, slot);
}

Vec partial_S_or_fd(const CovectorFn& analytic, const CovectorFn& g, const DiscreteTriple& t) {
  return analytic ? analytic(t) : Vec(fd_partial(g, t, Slot::S).col(0));
}

Mat newton_jacobian_block(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  return partial_or_fd(d.second.D2D1Ld, d.D1Ld, t, Slot::q1) +
         0.5 * partial_or_fd(d.second.D2ffr_minus, d.ffr_minus, t, Slot::q1);
}

ThermoState midstate(const DiscreteTriple& t, double h) {
  return ThermoState{0.5 * (t.q0 + t.q1), (t.q1 - t.q0) / h, t.S0};
}

Vec flatten(const DiscreteTriple& t) {
  const int n = t.n();
  Vec x(2 * n + 1);
  x << t.q0, t.q1, t.S0;
  return x;
}

DiscreteTriple unflatten(const Vec& x, int n) { return {x.head(n), x.segment(n, n), x(2 * n)}; }

}  // namespace

SecondPartialValues second_partials(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const auto& s = d.second;
  SecondPartialValues v;
  v.D1D1Ld = partial_or_fd(s.D1D1Ld, d.D1Ld, t, Slot::q0);
  v.D2D1Ld = partial_or_fd(s.D2D1Ld, d.D1Ld, t, Slot::q1);
  v.D1D2Ld = partial_or_fd(s.D1D2Ld, d.D2Ld, t, Slot::q0);
  v.D2D2Ld = partial_or_fd(s.D2D2Ld, d.D2Ld, t, Slot::q1);
  v.DSD1Ld = partial_S_or_fd(s.DSD1Ld, d.D1Ld, t);
  v.DSD2Ld = partial_S_or_fd(s.DSD2Ld, d.D2Ld, t);
  v.D1fm = partial_or_fd(s.D1ffr_minus, d.ffr_minus, t, Slot::q0);
  v.D2fm = partial_or_fd(s.D2ffr_minus, d.ffr_minus, t, Slot::q1);
  v.D1fp = partial_or_fd(s.D1ffr_plus, d.ffr_plus, t, Slot::q0);
  v.D2fp = partial_or_fd(s.D2ffr_plus, d.ffr_plus, t, Slot::q1);
  v.DSfm = partial_S_or_fd(s.DSffr_minus, d.ffr_minus, t);
  v.DSfp = partial_S_or_fd(s.DSffr_plus, d.ffr_plus, t);
  return v;
}

DiscreteThermoSystem midpoint_discretize(const LagrangianThermoSystem& sys_in, double h) {
  if (!(h > 0.0)) throw ConfigError("midpoint_discretize: time step must be positive");
  auto sys = std::make_shared<const LagrangianThermoSystem>(sys_in);
  auto at = [sys, h](const DiscreteTriple& t) {
    ThermoState x = midstate(t, h);
    if (sys->guard) sys->guard(x);
    return x;
  };

  DiscreteThermoSystem d;
  d.n = sys->n;
  d.h = h;
  d.Ld = [sys, at](const DiscreteTriple& t) { return sys->L(at(t)); };
  d.D1Ld = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Vec(0.5 * sys->dLdq(x) - sys->dLdv(x) / h);
  };
  d.D2Ld = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Vec(0.5 * sys->dLdq(x) + sys->dLdv(x) / h);
  };
  d.DSLd = [sys, at](const DiscreteTriple& t) { return sys->dLdS(at(t)); };
  d.ffr_minus = [sys, at](const DiscreteTriple& t) { return sys->friction(at(t)); };
  d.ffr_plus = d.ffr_minus;
  if (sys->guard) d.guard = [at](const DiscreteTriple& t) { at(t); };

  // Chain rule through m = (q0+q1)/2, v = (q1-q0)/h.
  const double h2 = h * h;
  auto& s = d.second;
  s.D1D1Ld = [sys, at, h, h2](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    const Mat Lqv = continuous::hessian_qv(*sys, x);
    return Mat(0.25 * continuous::hessian_qq(*sys, x) - (Lqv + Lqv.transpose()) / (2.0 * h) +
               continuous::hessian_vv(*sys, x) / h2);
  };
  s.D2D1Ld = [sys, at, h, h2](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    const Mat Lqv = continuous::hessian_qv(*sys, x);
    return Mat(0.25 * continuous::hessian_qq(*sys, x) + (Lqv - Lqv.transpose()) / (2.0 * h) -
               continuous::hessian_vv(*sys, x) / h2);
  };
  s.D1D2Ld = [sys, at, h, h2](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    const Mat Lqv = continuous::hessian_qv(*sys, x);
    return Mat(0.25 * continuous::hessian_qq(*sys, x) + (Lqv.transpose() - Lqv) / (2.0 * h) -
               continuous::hessian_vv(*sys, x) / h2);
  };
  s.D2D2Ld = [sys, at, h, h2](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    const Mat Lqv = continuous::hessian_qv(*sys, x);
    return Mat(0.25 * continuous::hessian_qq(*sys, x) + (Lqv + Lqv.transpose()) / (2.0 * h) +
               continuous::hessian_vv(*sys, x) / h2);
  };
  s.DSD1Ld = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Vec(0.5 * continuous::mixed_qS(*sys, x) - continuous::mixed_vS(*sys, x) / h);
  };
  s.DSD2Ld = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Vec(0.5 * continuous::mixed_qS(*sys, x) + continuous::mixed_vS(*sys, x) / h);
  };
  s.D1ffr_minus = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Mat(0.5 * continuous::friction_dq(*sys, x) - continuous::friction_dv(*sys, x) / h);
  };
  s.D2ffr_minus = [sys, at, h](const DiscreteTriple& t) {
    const ThermoState x = at(t);
    return Mat(0.5 * continuous::friction_dq(*sys, x) + continuous::friction_dv(*sys, x) / h);
  };
  s.D1ffr_plus = s.D1ffr_minus;
  s.D2ffr_plus = s.D2ffr_minus;
  s.DSffr_minus = [sys, at](const DiscreteTriple& t) { return continuous::friction_dS(*sys, at(t)); };
  s.DSffr_plus = s.DSffr_minus;
  return d;
}

double entropy_update(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const double DS = d.DSLd(t);
  if (DS == 0.0) throw TemperatureDegenerateError("entropy_update: D_S L_d vanishes");
  const Vec fp = d.ffr_plus(t);
  const Vec fm = d.ffr_minus(t);
  // f+ . q1 - f- . q0, grouped to avoid cancellation when f+ = f-.
  const double work = fp.dot(t.q1 - t.q0) + (fp - fm).dot(t.q0);
  return t.S0 + work / DS;
}

Vec del_residual(const DiscreteThermoSystem& d, const Vec& q_prev, const Vec& q_curr, double S_prev,
                 const Vec& q_next, double S_curr) {
  const DiscreteTriple next{q_curr, q_next, S_curr};
  const DiscreteTriple prev{q_prev, q_curr, S_prev};
  return d.D1Ld(next) + 0.5 * d.ffr_minus(next) + d.D2Ld(prev) + 0.5 * d.ffr_plus(prev);
}

Vec ddel_map(const DiscreteThermoSystem& d, const Vec& q_prev, const Vec& q_curr, const Vec& q_next,
             double S_prev, double S_curr) {
  return del_residual(d, q_prev, q_curr, S_prev, q_next, S_curr);
}

CotangentPoint legendre_plus(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  return {t.q1, d.D2Ld(t) + 0.5 * d.ffr_plus(t), entropy_update(d, t)};
}

CotangentPoint legendre_minus(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  return {t.q0, -d.D1Ld(t) - 0.5 * d.ffr_minus(t), t.S0};
}

DiscreteMomenta discrete_momenta(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const double h = d.h;
  return {-h * d.D1Ld(t) - 0.5 * h * d.ffr_minus(t), h * d.D2Ld(t) + 0.5 * h * d.ffr_plus(t)};
}

DiscreteTriple discrete_flow(const DiscreteThermoSystem& d, const DiscreteTriple& t, const solve::NewtonConfig& cfg,
                             solve::StepReport* report) {
  const double S1 = entropy_update(d, t);
  const double h2 = d.h * d.h;
  const Vec carried = d.D2Ld(t) + 0.5 * d.ffr_plus(t);
  const Vec q1 = t.q1;
  auto residual = [&](const Vec& x) {
    const DiscreteTriple next{q1, x, S1};
    return Vec(h2 * (d.D1Ld(next) + 0.5 * d.ffr_minus(next) + carried));
  };
  auto jacobian = [&](const Vec& x) { return Mat(h2 * newton_jacobian_block(d, {q1, x, S1})); };
  const Vec guess = 2.0 * t.q1 - t.q0;
  const auto result = solve::newton_solve(residual, jacobian, guess, cfg);
  if (report) *report = result.report;
  return {t.q1, result.x, S1};
}

OmegaMatrices omega_matrices(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const auto& s = d.second;
  OmegaMatrices w;
  w.Wplus = partial_or_fd(s.D1D2Ld, d.D2Ld, t, Slot::q0) + 0.5 * partial_or_fd(s.D1ffr_plus, d.ffr_plus, t, Slot::q0);
  w.Wminus = newton_jacobian_block(d, t);
  return w;
}

Mat semiregularity_matrix(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  return -newton_jacobian_block(d, t);
}

Mat pulled_back_form_plus(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const int n = t.n();
  const auto sp = second_partials(d, t);
  Mat Jq = Mat::Zero(n, 2 * n + 1);
  Jq.block(0, n, n, n) = Mat::Identity(n, n);
  Mat Jp(n, 2 * n + 1);
  Jp << sp.D1D2Ld + 0.5 * sp.D1fp, sp.D2D2Ld + 0.5 * sp.D2fp, sp.DSD2Ld + 0.5 * sp.DSfp;
  return Jq.transpose() * Jp - Jp.transpose() * Jq;
}

Mat pulled_back_form_minus(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  const int n = t.n();
  const auto sp = second_partials(d, t);
  Mat Jq = Mat::Zero(n, 2 * n + 1);
  Jq.block(0, 0, n, n) = Mat::Identity(n, n);
  Mat Jp(n, 2 * n + 1);
  Jp << -(sp.D1D1Ld + 0.5 * sp.D1fm), -(sp.D2D1Ld + 0.5 * sp.D2fm), -(sp.DSD1Ld + 0.5 * sp.DSfm);
  return Jq.transpose() * Jp - Jp.transpose() * Jq;
}

Mat flow_jacobian(const DiscreteThermoSystem& d, const DiscreteTriple& t, const solve::NewtonConfig& cfg) {
  const int n = t.n();
  solve::NewtonConfig tight = cfg;
  tight.polish = std::max(tight.polish, 3);
  const Vec x = flatten(t);
  Mat J(2 * n + 1, 2 * n + 1);
  for (int j = 0; j < 2 * n + 1; ++j) {
    const double step = fd_step(x(j));
    Vec xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    const Vec fp = flatten(discrete_flow(d, unflatten(xp, n), tight));
    const Vec fm = flatten(discrete_flow(d, unflatten(xm, n), tight));
    J.col(j) = (fp - fm) / (2.0 * step);
  }
  return J;
}

double pullback_check(const DiscreteThermoSystem& d, const DiscreteTriple& t, const solve::NewtonConfig& cfg) {
  solve::NewtonConfig tight = cfg;
  tight.polish = std::max(tight.polish, 3);
  const DiscreteTriple image = discrete_flow(d, t, tight);
  const Mat J = flow_jacobian(d, t, cfg);
  const Mat lhs = J.transpose() * pulled_back_form_minus(d, image) * J;
  return max_abs(Mat(lhs - pulled_back_form_plus(d, t)));
}

double momentum_map(const DiscreteThermoSystem& d, const DiscreteTriple& t, const continuous::VectorFieldQ& xi,
                    Side side) {
  const auto p = discrete_momenta(d, t);
  return side == Side::plus ? p.p_plus.dot(xi.value(t.q1)) : p.p_minus.dot(xi.value(t.q0));
}

NoetherCondition noether_condition(const DiscreteThermoSystem& d, const continuous::VectorFieldQ& xi,
                                   const std::vector<DiscreteTriple>& samples, double tol) {
  NoetherCondition out;
  for (const auto& t : samples) {
    const Vec x0 = xi.value(t.q0);
    const Vec x1 = xi.value(t.q1);
    const double dL = d.D1Ld(t).dot(x0) + d.D2Ld(t).dot(x1);
    const double work = 0.5 * (d.ffr_minus(t).dot(x0) + d.ffr_plus(t).dot(x1));
    out.max_defect = std::max(out.max_defect, std::abs(dL + work));
  }
  out.holds = out.max_defect <= tol;
  return out;
}

double path_constraint_residual(const DiscreteThermoSystem& d, const DiscretePath& path) {
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < path.qs.size(); ++k) {
    const double expected = entropy_update(d, path.triple(k));
    worst = std::max(worst, std::abs(path.Ss[k + 1] - expected) / (1.0 + std::abs(expected)));
  }
  return worst;
}

double discrete_action(const DiscreteThermoSystem& d, const DiscretePath& path) {
  if (path.qs.size() != path.Ss.size()) throw ConfigError("discrete_action: qs and Ss differ in length");
  if (path_constraint_residual(d, path) > 1e-12) {
    throw ConfigError("discrete_action: path violates the entropy-update constraint");
  }
  double action = 0.0;
  for (std::size_t k = 0; k + 1 < path.qs.size(); ++k) action += d.Ld(path.triple(k));
  return action;
}

BoundaryForms boundary_forms(const DiscreteThermoSystem& d, const DiscreteTriple& t) {
  return {-(d.D1Ld(t) + 0.5 * d.ffr_minus(t)), d.D2Ld(t) + 0.5 * d.ffr_plus(t)};
}

double momentum_matching_residual(const DiscreteThermoSystem& d, const DiscretePath& path) {
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < path.qs.size(); ++k) {
    const Vec p_plus = discrete_momenta(d, path.triple(k - 1)).p_plus;
    const Vec p_minus = discrete_momenta(d, path.triple(k)).p_minus;
    worst = std::max(worst, max_abs(Vec(p_plus - p_minus)));
  }
  return worst;
}

}  // namespace thermovi::discrete
