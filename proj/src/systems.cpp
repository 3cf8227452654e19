#include "thermovi/systems.hpp"

#include <cmath>

#include "thermovi/errors.hpp"

namespace thermovi::systems {

namespace {

// Potential U(q, S) with the derivatives needed by the chain rule.
struct Potential {
  std::function<double(const Vec&, double)> U;
  std::function<Vec(const Vec&, double)> grad;
  std::function<Mat(const Vec&, double)> hess;
  std::function<double(const Vec&, double)> dS;
  std::function<Vec(const Vec&, double)> grad_S;
  std::function<void(const Vec&)> guard;
};

// L = |v|^2/2 - U(q, S), Rayleigh friction -gamma v.
SystemCatalogEntry standard_system(const std::string& name, int n, double gamma, const Potential& P) {
  using continuous::ThermoState;
  SystemCatalogEntry e;
  auto& s = e.lagrangian;
  s.name = name;
  s.n = n;
  s.params["gamma"] = gamma;
  s.L = [P](const ThermoState& x) { return 0.5 * x.v.squaredNorm() - P.U(x.q, x.S); };
  s.dLdq = [P](const ThermoState& x) { return Vec(-P.grad(x.q, x.S)); };
  s.dLdv = [](const ThermoState& x) { return x.v; };
  s.dLdS = [P](const ThermoState& x) { return -P.dS(x.q, x.S); };
  s.friction = [gamma](const ThermoState& x) { return Vec(-gamma * x.v); };
  s.d2Ldq2 = [P](const ThermoState& x) { return Mat(-P.hess(x.q, x.S)); };
  s.d2Ldqdv = [n](const ThermoState&) { return Mat(Mat::Zero(n, n)); };
  s.d2Ldv2 = [n](const ThermoState&) { return Mat(Mat::Identity(n, n)); };
  s.d2LdqdS = [P](const ThermoState& x) { return Vec(-P.grad_S(x.q, x.S)); };
  s.d2LdvdS = [n](const ThermoState&) { return Vec(Vec::Zero(n)); };
  s.dFdq = [n](const ThermoState&) { return Mat(Mat::Zero(n, n)); };
  s.dFdv = [n, gamma](const ThermoState&) { return Mat(-gamma * Mat::Identity(n, n)); };
  s.dFdS = [n](const ThermoState&) { return Vec(Vec::Zero(n)); };
  s.acceleration = [P, gamma](const ThermoState& x) { return Vec(-P.grad(x.q, x.S) - gamma * x.v); };
  if (P.guard) {
    auto g = P.guard;
    s.guard = [g](const ThermoState& x) { g(x.q); };
  }

  e.H = [P](const Vec& q, const Vec& p, double S) { return 0.5 * p.squaredNorm() + P.U(q, S); };
  e.dH = [P, n](const Vec& q, const Vec& p, double S) {
    Vec d(2 * n + 1);
    d << P.grad(q, S), p, P.dS(q, S);
    return d;
  };
  e.friction = [gamma](const Vec&, const Vec& p, double) { return Vec(-gamma * p); };
  return e;
}

Vec scalar_vec(double x) { return Vec::Constant(1, x); }
Mat scalar_mat(double x) { return Mat::Constant(1, 1, x); }
ThermoState state1(double q, double v, double S) { return {scalar_vec(q), scalar_vec(v), S}; }

}  // namespace

LinearRecurrence oscillator_recurrence(double gamma, double h) {
  const double den = 4.0 + h * (h + 2.0 * gamma);
  return {2.0 * (4.0 - h * h) / den, (4.0 + h * h - 2.0 * h * gamma) / den};
}

LinearRecurrence oscillator_recurrence_printed(double gamma, double h) {
  const double den = 4.0 + h * (h + 2.0 * gamma);
  return {2.0 * (4.0 - h * h) / den, (4.0 + h * h - 4.0 * h * gamma) / den};
}

SystemCatalogEntry oscillator(double gamma) {
  if (!(gamma > 0.0)) throw ConfigError("oscillator: gamma must be positive");
  Potential P;
  P.U = [gamma](const Vec& q, double S) { return 0.5 * q.squaredNorm() + gamma * S; };
  P.grad = [](const Vec& q, double) { return q; };
  P.hess = [](const Vec& q, double) { return Mat(Mat::Identity(q.size(), q.size())); };
  P.dS = [gamma](const Vec&, double) { return gamma; };
  P.grad_S = [](const Vec& q, double) { return Vec(Vec::Zero(q.size())); };
  auto e = standard_system("oscillator", 1, gamma, P);
  e.initial = state1(0.0, 1.0, 0.0);
  e.default_h = 0.01;
  e.default_t_final = 1000.0;
  e.default_init_mode = "exact";
  e.box = {-2.0, 2.0, -2.0, 2.0, -1.0, 1.0};

  const double w = std::sqrt(1.0 - 0.25 * gamma * gamma);
  ExactSolution ex;
  ex.q = [gamma, w](const ThermoState& x0, double t) {
    const double q0 = x0.q(0), B = (x0.v(0) + 0.5 * gamma * q0) / w;
    return scalar_vec(std::exp(-0.5 * gamma * t) * (q0 * std::cos(w * t) + B * std::sin(w * t)));
  };
  ex.v = [gamma, w](const ThermoState& x0, double t) {
    const double q0 = x0.q(0), B = (x0.v(0) + 0.5 * gamma * q0) / w;
    const double c = std::cos(w * t), s = std::sin(w * t);
    return scalar_vec(std::exp(-0.5 * gamma * t) * (-0.5 * gamma * (q0 * c + B * s) + w * (B * c - q0 * s)));
  };
  auto v = ex.v;
  ex.Sdot = [v](const ThermoState& x0, double t) { return v(x0, t).squaredNorm(); };
  e.exact = ex;
  e.closed_form = [gamma](double h) { return oscillator_recurrence(gamma, h); };
  return e;
}

SystemCatalogEntry ideal_gas(double gamma, double c) {
  if (!(c > 0.0)) throw ConfigError("ideal_gas: c must be positive");
  const double k = 1.0 / c;
  Potential P;
  P.U = [k](const Vec& q, double S) { return std::exp(S) * std::pow(q(0), -k); };
  P.grad = [k](const Vec& q, double S) { return scalar_vec(-k * std::exp(S) * std::pow(q(0), -k - 1.0)); };
  P.hess = [k](const Vec& q, double S) { return scalar_mat(k * (k + 1.0) * std::exp(S) * std::pow(q(0), -k - 2.0)); };
  P.dS = P.U;
  P.grad_S = P.grad;
  P.guard = [](const Vec& q) {
    if (!(q(0) > 0.0)) throw DomainError("ideal-gas: piston position must be positive");
  };
  auto e = standard_system("ideal-gas", 1, gamma, P);
  e.lagrangian.params["c"] = c;
  e.initial = state1(1.0, 0.0, 10.0);
  e.box = {0.5, 3.0, -2.0, 2.0, -1.0, 1.0};
  return e;
}

SystemCatalogEntry van_der_waals(double gamma, double a_hat, double b_hat) {
  const double k = 2.0 / 3.0;
  Potential P;
  P.U = [=](const Vec& q, double S) { return std::pow(q(0) - b_hat, -k) * std::exp(S) - a_hat / q(0); };
  P.grad = [=](const Vec& q, double S) {
    const double x = q(0);
    return scalar_vec(-k * std::pow(x - b_hat, -k - 1.0) * std::exp(S) + a_hat / (x * x));
  };
  P.hess = [=](const Vec& q, double S) {
    const double x = q(0);
    return scalar_mat(k * (k + 1.0) * std::pow(x - b_hat, -k - 2.0) * std::exp(S) - 2.0 * a_hat / (x * x * x));
  };
  P.dS = [=](const Vec& q, double S) { return std::pow(q(0) - b_hat, -k) * std::exp(S); };
  P.grad_S = [=](const Vec& q, double S) { return scalar_vec(-k * std::pow(q(0) - b_hat, -k - 1.0) * std::exp(S)); };
  P.guard = [b_hat](const Vec& q) {
    if (!(q(0) > b_hat)) throw DomainError("van-der-waals: piston position must exceed b");
  };
  auto e = standard_system("van-der-waals", 1, gamma, P);
  e.lagrangian.params["a"] = a_hat;
  e.lagrangian.params["b"] = b_hat;
  e.initial = state1(1.0, 0.0, 10.0);
  e.box = {2.0, 5.0, -2.0, 2.0, -1.0, 1.0};
  return e;
}

SystemCatalogEntry two_pistons(double gamma) {
  if (gamma < 0.0) throw ConfigError("two_pistons: gamma must be nonnegative");
  const double k = 1.0 / 1.5;
  Potential P;
  P.U = [k](const Vec& q, double S) { return std::exp(S) * std::pow(q.sum(), -k); };
  P.grad = [k](const Vec& q, double S) { return Vec(Vec::Constant(2, -k * std::exp(S) * std::pow(q.sum(), -k - 1.0))); };
  P.hess = [k](const Vec& q, double S) {
    return Mat(Mat::Constant(2, 2, k * (k + 1.0) * std::exp(S) * std::pow(q.sum(), -k - 2.0)));
  };
  P.dS = P.U;
  P.grad_S = P.grad;
  P.guard = [](const Vec& q) {
    if (!(q.sum() > 0.0)) throw DomainError("two-pistons: x + y must be positive");
  };
  auto e = standard_system("two-pistons", 2, gamma, P);
  e.lagrangian.params["c"] = 1.5;
  Vec q0(2), v0(2);
  q0 << 1.0, 2.0;
  v0 << 0.5, -0.3;
  e.initial = {q0, v0, 0.0};
  e.default_init_mode = "reference";
  e.box = {0.5, 2.0, -2.0, 2.0, -1.0, 1.0};
  e.cartan = [gamma](const ThermoState& x) { return two_piston_g(gamma, x); };
  return e;
}

SystemCatalogEntry two_pistons_frictionless() {
  auto e = two_pistons(0.0);
  e.cartan = nullptr;
  return e;
}

double two_piston_g_printed(double gamma, const ThermoState& x) {
  return gamma * (x.q(0) - x.q(1)) + x.v(1) - x.v(0);
}

double two_piston_g(double gamma, const ThermoState& x) {
  return gamma * (x.q(0) - x.q(1)) + x.v(0) - x.v(1);
}

std::vector<std::string> catalog_names() { return {"oscillator", "ideal-gas", "van-der-waals", "two-pistons"}; }

SystemCatalogEntry by_name(const std::string& name, double gamma) {
  if (name == "oscillator") return oscillator(gamma);
  if (name == "ideal-gas") return ideal_gas(gamma);
  if (name == "van-der-waals") return van_der_waals(gamma);
  if (name == "two-pistons") return two_pistons(gamma);
  throw ConfigError("unknown system '" + name + "'");
}

geometry::HamiltonianPoint hamiltonian_point(const SystemCatalogEntry& e, const Vec& q, const Vec& p, double S) {
  if (e.lagrangian.guard) e.lagrangian.guard({q, p, S});
  geometry::HamiltonianPoint pt;
  pt.q = q;
  pt.p = p;
  pt.S = S;
  pt.dH = e.dH(q, p, S);
  pt.Ffr = e.friction(q, p, S);
  pt.Fext = Vec::Zero(q.size());
  return pt;
}

}  // namespace thermovi::systems
