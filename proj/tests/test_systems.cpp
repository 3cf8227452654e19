#include <cmath>

#include <gtest/gtest.h>

#include "thermovi/errors.hpp"
#include "thermovi/integrate.hpp"
#include "thermovi/reference.hpp"
#include "thermovi/systems.hpp"

using namespace thermovi;
using namespace thermovi::systems;

namespace {
Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
}  // namespace

TEST(Catalog, NamesResolve) {
  const auto names = catalog_names();
  ASSERT_EQ(names.size(), 4u);
  for (const auto& n : names) EXPECT_EQ(by_name(n).name(), n);
  EXPECT_THROW(by_name("pendulum"), ConfigError);
  EXPECT_THROW(oscillator(0.0), ConfigError);
  EXPECT_THROW(ideal_gas(0.1, -1.0), ConfigError);
  EXPECT_THROW(two_pistons(-0.1), ConfigError);
  EXPECT_NO_THROW(two_pistons(0.0));
}

TEST(Catalog, Defaults) {
  const auto o = oscillator();
  EXPECT_EQ(o.initial.q(0), 0.0);
  EXPECT_EQ(o.initial.v(0), 1.0);
  EXPECT_EQ(o.initial.S, 0.0);
  EXPECT_EQ(o.default_t_final, 1000.0);
  EXPECT_EQ(o.default_init_mode, "exact");
  EXPECT_TRUE(o.exact.has_value());
  EXPECT_TRUE(static_cast<bool>(o.closed_form));
  const auto g = ideal_gas();
  EXPECT_EQ(g.initial.q(0), 1.0);
  EXPECT_EQ(g.initial.v(0), 0.0);
  EXPECT_EQ(g.initial.S, 10.0);
  EXPECT_FALSE(g.exact.has_value());
  EXPECT_EQ(two_pistons().n(), 2);
  EXPECT_TRUE(static_cast<bool>(two_pistons().cartan));
  EXPECT_FALSE(static_cast<bool>(two_pistons_frictionless().cartan));
}

TEST(Oscillator, RecurrenceCoefficients) {
  const double g = 0.1, h = 0.1;
  const auto r = oscillator_recurrence(g, h);
  const double den = 4 + h * (h + 2 * g);
  EXPECT_NEAR(r.a, 2 * (4 - h * h) / den, 1e-16);
  EXPECT_NEAR(r.b, (4 + h * h - 2 * h * g) / den, 1e-16);
  const auto p = oscillator_recurrence_printed(g, h);
  EXPECT_EQ(p.a, r.a);
  EXPECT_NEAR(p.b, (4 + h * h - 4 * h * g) / den, 1e-16);
  const auto z = oscillator_recurrence(0.0, h);
  EXPECT_NEAR(z.b, 1.0, 1e-16);
  EXPECT_EQ(oscillator_recurrence_printed(0.0, h).b, z.b);
}

TEST(Oscillator, ExactSolution) {
  const auto e = oscillator(0.1);
  const auto& ex = *e.exact;
  EXPECT_NEAR(ex.q(e.initial, 0.01)(0), 0.0099948350837246703432, 1e-17);
  EXPECT_NEAR(ex.q(e.initial, 0.0)(0), 0.0, 1e-17);
  EXPECT_NEAR(ex.v(e.initial, 0.0)(0), 1.0, 1e-15);
  // q'' = -q - gamma q'
  const double t = 2.7, dt = 1e-4;
  const double a = (ex.v(e.initial, t + dt)(0) - ex.v(e.initial, t - dt)(0)) / (2 * dt);
  EXPECT_NEAR(a, -ex.q(e.initial, t)(0) - 0.1 * ex.v(e.initial, t)(0), 1e-8);
  EXPECT_NEAR(ex.Sdot(e.initial, t), std::pow(ex.v(e.initial, t)(0), 2), 1e-15);
}

TEST(Oscillator, ExactEntropy) {
  const auto e = oscillator(0.1);
  EXPECT_NEAR(reference::exact_entropy_increment(*e.exact, e.initial, 0.0, 1.0), 0.66596560978535823715, 1e-13);
  EXPECT_NEAR(reference::exact_entropy_increment(*e.exact, e.initial, 0.0, 10.0), 3.2410810749245645951, 1e-12);
  const auto tr = reference::exact_trajectory(e, e.initial, 0.01, 1000);
  EXPECT_NEAR(tr.states.back().S, 3.2410810749245645951, 1e-12);
  EXPECT_NEAR(tr.states[100].S, 0.66596560978535823715, 1e-13);
}

TEST(Pistons, CartanQuantities) {
  const continuous::ThermoState x{v2(1.0, 2.0), v2(0.5, -0.3), 0.0};
  EXPECT_NEAR(two_piston_g(0.1, x), 0.1 * (1.0 - 2.0) + 0.5 + 0.3, 1e-16);
  EXPECT_NEAR(two_piston_g_printed(0.1, x), 0.1 * (1.0 - 2.0) - 0.3 - 0.5, 1e-16);
}

TEST(Pistons, CorrectedCartanQuantityIsConserved) {
  const auto e = two_pistons(0.1);
  const auto tr = reference::reference_integrate_to(e.lagrangian, e.initial, 10.0, 0.01);
  EXPECT_LT(continuous::conserved_along(tr, e.cartan), 1e-7);
  EXPECT_GT(continuous::conserved_along(tr, [](const auto& s) { return two_piston_g_printed(0.1, s); }), 0.1);
}

TEST(Pistons, SymmetricStartStaysSymmetric) {
  const auto e = two_pistons(0.2);
  const double h = 0.01;
  const auto d = discrete::midpoint_discretize(e.lagrangian, h);
  const auto path = solve::integrate(d, v2(1.0, 1.0), v2(1.002, 1.002), 0.0, 500);
  for (const auto& q : path.qs) EXPECT_LT(std::abs(q(0) - q(1)), 1e-13);
}

TEST(Gases, VanDerWaalsReducesToIdealGas) {
  const auto a = ideal_gas(0.1);
  const auto b = van_der_waals(0.1, 0.0, 0.0);
  for (const double x : {0.6, 1.0, 2.7})
    EXPECT_NEAR(a.H(v1(x), v1(0.3), 1.5), b.H(v1(x), v1(0.3), 1.5), 1e-12);
}

TEST(Gases, HamiltonianPointData) {
  const auto e = ideal_gas(0.1);
  const auto pt = hamiltonian_point(e, v1(1.0), v1(2.0), 10.0);
  EXPECT_NEAR(pt.dH(1), 2.0, 1e-15);
  EXPECT_NEAR(pt.dHdS() / std::exp(10.0), 1.0, 1e-14);
  EXPECT_NEAR(pt.dH(0) / std::exp(10.0), -1.0 / 1.5, 1e-14);
  EXPECT_NEAR(pt.Ffr(0), -0.2, 1e-16);
  EXPECT_EQ(max_abs(pt.Fext), 0.0);
  EXPECT_THROW(hamiltonian_point(e, v1(-1.0), v1(0.0), 0.0), DomainError);
}
