#include <cmath>

#include <gtest/gtest.h>

#include "thermovi/continuous.hpp"
#include "thermovi/errors.hpp"
#include "thermovi/geometry.hpp"
#include "thermovi/reference.hpp"
#include "thermovi/sweep.hpp"
#include "thermovi/systems.hpp"

using namespace thermovi;
using namespace thermovi::continuous;

namespace {

Vec v1(double a) { return Vec::Constant(1, a); }
Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

ThermoState st1(double q, double v, double S) { return {v1(q), v1(v), S}; }

std::vector<ThermoState> samples(const systems::SystemCatalogEntry& e, std::size_t count, std::uint64_t seed) {
  std::vector<ThermoState> out;
  for (const auto& p : sweep::random_phase_points(e, count, seed)) out.push_back({p.q, p.p, p.S});
  return out;
}

// L = |v|^2/2 - S with friction -g v, first partials only.
LagrangianThermoSystem linear_entropy_particle(int n, double g) {
  LagrangianThermoSystem s;
  s.name = "free";
  s.n = n;
  s.L = [](const ThermoState& x) { return 0.5 * x.v.squaredNorm() - x.S; };
  s.dLdq = [n](const ThermoState&) { return Vec(Vec::Zero(n)); };
  s.dLdv = [](const ThermoState& x) { return x.v; };
  s.dLdS = [](const ThermoState&) { return -1.0; };
  s.friction = [g](const ThermoState& x) { return Vec(-g * x.v); };
  return s;
}

// Drop the analytic second partials so the finite-difference fallback is used.
LagrangianThermoSystem without_second_partials(LagrangianThermoSystem s) {
  s.d2Ldq2 = {};
  s.d2Ldqdv = {};
  s.d2Ldv2 = {};
  s.d2LdqdS = {};
  s.d2LdvdS = {};
  s.dFdq = {};
  s.dFdv = {};
  s.dFdS = {};
  s.acceleration = {};
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(Energy, OscillatorValues) {
  const auto e = systems::oscillator(0.1);
  EXPECT_DOUBLE_EQ(energy(e.lagrangian, st1(0.0, 1.0, 0.0)), 0.5);
  EXPECT_NEAR(energy(e.lagrangian, st1(2.0, 0.0, 1.0)), 2.0 + 0.1, 1e-15);
  EXPECT_NEAR(temperature(e.lagrangian, st1(0.3, 0.2, 4.0)), 0.1, 1e-15);
}

TEST(Energy, IdealGasAtRestIsInternalEnergy) {
  const auto e = systems::ideal_gas();
  const auto x = st1(1.0, 0.0, 10.0);
  EXPECT_LT(rel(energy(e.lagrangian, x), std::exp(10.0)), 1e-14);
  EXPECT_LT(rel(temperature(e.lagrangian, x), std::exp(10.0)), 1e-14);
}

TEST(Rhs, OscillatorExamples) {
  const auto e = systems::oscillator(0.1);
  const auto r = continuous_rhs(e.lagrangian, st1(1.0, 0.0, 0.0));
  EXPECT_EQ(r.qdot(0), 0.0);
  EXPECT_NEAR(r.vdot(0), -1.0, 1e-15);
  EXPECT_EQ(r.Sdot, 0.0);
  const auto r2 = continuous_rhs(e.lagrangian, st1(0.0, 1.0, 0.0));
  EXPECT_NEAR(r2.vdot(0), -0.1, 1e-15);
  EXPECT_NEAR(r2.Sdot, 1.0, 1e-15);
}

TEST(Rhs, GasAccelerationsAtRest) {
  const auto ig = continuous_rhs(systems::ideal_gas().lagrangian, st1(1.0, 0.0, 10.0));
  EXPECT_LT(rel(ig.vdot(0), 14684.310529871144345), 1e-14);
  EXPECT_EQ(ig.Sdot, 0.0);
  const auto vdw = continuous_rhs(systems::van_der_waals().lagrangian, st1(1.0, 0.0, 10.0));
  EXPECT_LT(rel(vdw.vdot(0), 16503.143131905259485) / 16503.0, 1e-14);
}

TEST(Rhs, VanDerWaalsWithoutCorrectionsIsIdealGas) {
  const auto a = systems::ideal_gas(0.2).lagrangian;
  const auto b = systems::van_der_waals(0.2, 0.0, 0.0).lagrangian;
  for (const auto& x : {st1(1.0, 0.5, 1.0), st1(2.5, -1.0, 0.3), st1(0.7, 0.0, 2.0)}) {
    const auto ra = continuous_rhs(a, x), rb = continuous_rhs(b, x);
    EXPECT_LT(rel(ra.vdot(0), rb.vdot(0)), 1e-14);
    EXPECT_LT(rel(ra.Sdot, rb.Sdot), 1e-14);
  }
}

TEST(Rhs, GuardRejectsOutOfDomain) {
  EXPECT_THROW(continuous_rhs(systems::ideal_gas().lagrangian, st1(-1.0, 0.0, 0.0)), DomainError);
  EXPECT_THROW(continuous_rhs(systems::van_der_waals().lagrangian, st1(0.05, 0.0, 0.0)), DomainError);
}

TEST(Rhs, TemperatureDegenerate) {
  auto s = linear_entropy_particle(1, 0.1);
  s.dLdS = [](const ThermoState&) { return 0.0; };
  EXPECT_THROW(continuous_rhs(s, st1(0.0, 1.0, 0.0)), TemperatureDegenerateError);
}

class CatalogRhs : public ::testing::TestWithParam<std::string> {};

TEST_P(CatalogRhs, GenericSolveMatchesClosedForm) {
  const auto e = systems::by_name(GetParam());
  for (const auto& x : samples(e, 50, 3)) {
    const auto a = continuous_rhs(e.lagrangian, x);
    const auto b = generic_rhs(e.lagrangian, x);
    const double scale = 1.0 + max_abs(a.vdot);
    EXPECT_LT(max_abs(Vec(a.vdot - b.vdot)), 1e-12 * scale);
    EXPECT_LT(std::abs(a.Sdot - b.Sdot), 1e-12 * (1.0 + std::abs(a.Sdot)));
  }
}

TEST_P(CatalogRhs, EntropyProductionNonnegative) {
  const auto e = systems::by_name(GetParam());
  for (const auto& x : samples(e, 200, 5)) {
    ASSERT_GT(temperature(e.lagrangian, x), 0.0);
    EXPECT_GE(continuous_rhs(e.lagrangian, x).Sdot, 0.0);
  }
}

TEST_P(CatalogRhs, HamiltonianOfLegendreIsEnergy) {
  const auto e = systems::by_name(GetParam());
  for (const auto& x : samples(e, 50, 7)) {
    const auto l = legendre(e.lagrangian, x);
    EXPECT_LT(max_abs(Vec(l.p - x.v)), 1e-15);
    const double E = energy(e.lagrangian, x);
    EXPECT_LT(std::abs(e.H(l.q, l.p, l.S) - E), 1e-12 * (1.0 + std::abs(E)));
  }
}

TEST_P(CatalogRhs, HamiltonianFieldReproducesRhs) {
  const auto e = systems::by_name(GetParam());
  const int n = e.n();
  for (const auto& x : samples(e, 50, 9)) {
    const auto r = continuous_rhs(e.lagrangian, x);
    const Vec E = geometry::evolution_field_coordinates(systems::hamiltonian_point(e, x.q, x.v, x.S));
    const double scale = 1.0 + max_abs(r.vdot);
    EXPECT_LT(max_abs(Vec(E.head(n) - r.qdot)), 1e-14);
    EXPECT_LT(max_abs(Vec(E.segment(n, n) - r.vdot)), 1e-12 * scale);
    EXPECT_LT(std::abs(E(2 * n) - r.Sdot), 1e-12 * (1.0 + std::abs(r.Sdot)));
  }
}

TEST_P(CatalogRhs, AnalyticSecondPartialsMatchFiniteDifferences) {
  const auto e = systems::by_name(GetParam());
  const auto fd = without_second_partials(e.lagrangian);
  for (const auto& x : samples(e, 20, 11)) {
    auto check = [](const auto& a, const auto& b) {
      const double scale = 1.0 + max_abs(a);
      EXPECT_LT(max_abs(std::decay_t<decltype(a)>(a - b)) / scale, 1e-6);
    };
    check(hessian_qq(e.lagrangian, x), hessian_qq(fd, x));
    check(hessian_qv(e.lagrangian, x), hessian_qv(fd, x));
    check(hessian_vv(e.lagrangian, x), hessian_vv(fd, x));
    check(mixed_qS(e.lagrangian, x), mixed_qS(fd, x));
    check(mixed_vS(e.lagrangian, x), mixed_vS(fd, x));
    check(friction_dq(e.lagrangian, x), friction_dq(fd, x));
    check(friction_dv(e.lagrangian, x), friction_dv(fd, x));
    check(friction_dS(e.lagrangian, x), friction_dS(fd, x));
  }
}

INSTANTIATE_TEST_SUITE_P(Catalog, CatalogRhs,
                         ::testing::Values("oscillator", "ideal-gas", "van-der-waals", "two-pistons"),
                         [](const auto& info) {
                           std::string s = info.param;
                           for (auto& ch : s)
                             if (ch == '-') ch = '_';
                           return s;
                         });

TEST(Noether, FrictionlessPistonsTranslation) {
  const auto e = systems::two_pistons_frictionless();
  const auto X = constant_field(v2(1.0, -1.0));
  EXPECT_TRUE(noether_lift_check(e.lagrangian, X, samples(e, 50, 13)).holds);
  const auto x = samples(e, 1, 1).front();
  EXPECT_DOUBLE_EQ(noether_quantity(e.lagrangian, X, x), x.v(0) - x.v(1));
}

TEST(Noether, OscillatorHasNoTranslationSymmetry) {
  const auto e = systems::oscillator(0.1);
  const auto c = noether_lift_check(e.lagrangian, constant_field(v1(1.0)), samples(e, 20, 17));
  EXPECT_FALSE(c.holds);
  EXPECT_GT(c.max_defect, 1e-3);
}

TEST(Noether, FrictionBreaksTranslationOfFreeParticle) {
  const auto X = constant_field(v2(1.0, 0.0));
  const std::vector<ThermoState> xs{{v2(0.1, 0.2), v2(0.3, -0.5), 1.0}, {v2(-1.0, 2.0), v2(1.0, 0.0), 0.0}};
  EXPECT_TRUE(noether_lift_check(linear_entropy_particle(2, 0.0), X, xs).holds);
  EXPECT_FALSE(noether_lift_check(linear_entropy_particle(2, 0.5), X, xs).holds);
}

TEST(Conservation, ConstantQuantityHasZeroDrift) {
  const auto e = systems::oscillator(0.1);
  const auto tr = reference::reference_integrate(e.lagrangian, e.initial, 0.1, 50);
  EXPECT_EQ(conserved_along(tr, [](const ThermoState&) { return 3.0; }), 0.0);
}

TEST(Conservation, FrictionlessPistonsMomentumDifference) {
  const auto e = systems::two_pistons_frictionless();
  const auto tr = reference::reference_integrate_to(e.lagrangian, e.initial, 20.0, 0.01);
  const auto X = constant_field(v2(1.0, -1.0));
  EXPECT_LT(conserved_along(tr, [&](const ThermoState& x) { return noether_quantity(e.lagrangian, X, x); }), 1e-7);
  EXPECT_LT(conserved_along(tr, [&](const ThermoState& x) { return energy(e.lagrangian, x); }), 1e-7);
}

TEST(Conservation, OscillatorTotalEnergy) {
  const auto e = systems::oscillator(0.1);
  const auto tr = reference::reference_integrate_to(e.lagrangian, e.initial, 50.0, 0.01);
  EXPECT_LT(conserved_along(tr, [&](const ThermoState& x) { return energy(e.lagrangian, x); }), 1e-7);
}

TEST(FiniteDifferences, FallbackOnFirstPartialsOnly) {
  const auto s = linear_entropy_particle(2, 0.3);
  const ThermoState x{v2(0.4, -0.1), v2(0.7, 0.2), 0.5};
  EXPECT_LT(max_abs(Mat(hessian_vv(s, x) - Mat::Identity(2, 2))), 1e-8);
  EXPECT_LT(max_abs(hessian_qq(s, x)), 1e-8);
  EXPECT_LT(max_abs(Mat(friction_dv(s, x) + 0.3 * Mat::Identity(2, 2))), 1e-8);
  const auto r = continuous_rhs(s, x);
  EXPECT_LT(max_abs(Vec(r.vdot + 0.3 * x.v)), 1e-10);
  EXPECT_NEAR(r.Sdot, 0.3 * x.v.squaredNorm(), 1e-12);
}
