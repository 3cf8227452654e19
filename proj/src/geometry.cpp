#include "thermovi/geometry.hpp"

#include <cmath>

#include "thermovi/errors.hpp"

namespace thermovi::geometry {

namespace {

Vec force_covector(int n, const Vec& F) {
  Vec out = Vec::Zero(2 * n + 1);
  if (F.size() == n) out.head(n) = F;
  return out;
}

}  // namespace

Mat canonical_two_form(int n) {
  Mat W = Mat::Zero(2 * n + 1, 2 * n + 1);
  W.block(0, n, n, n) = Mat::Identity(n, n);
  W.block(n, 0, n, n) = -Mat::Identity(n, n);
  return W;
}

PointStructure make_structure(int n, const Vec& eta) {
  return PointStructure{n, canonical_two_form(n), eta};
}

PointStructure assemble_structure(const HamiltonianPoint& pt) {
  const int n = pt.n();
  const double dHdS = pt.dHdS();
  if (dHdS == 0.0) {
    throw TemperatureDegenerateError("assemble_structure: dH/dS vanishes (absolute zero)");
  }
  Vec eta = Vec::Zero(2 * n + 1);
  eta.head(n) = -pt.Ffr;
  eta(2 * n) = -dHdS;
  return make_structure(n, eta);
}

Mat flat_matrix(const PointStructure& s) {
  return s.W.transpose() + s.eta * s.eta.transpose();
}

Vec contract_omega(const PointStructure& s, const Vec& v) { return s.W.transpose() * v; }

bool is_almost_cosymplectic(const PointStructure& s) { return is_invertible(flat_matrix(s)); }

Vec reeb_field(const PointStructure& s) {
  try {
    return solve_dense(flat_matrix(s), s.eta);
  } catch (const SingularMatrixError&) {
    throw StructureDegenerateError("reeb_field: flat map is singular");
  }
}

Vec evolution_field(const PointStructure& s, const HamiltonianPoint& pt) {
  const Vec rhs = pt.dH + s.eta - force_covector(s.n, pt.Fext);
  try {
    return solve_dense(flat_matrix(s), rhs);
  } catch (const SingularMatrixError&) {
    throw StructureDegenerateError("evolution_field: flat map is singular");
  }
}

Vec evolution_field_coordinates(const HamiltonianPoint& pt) {
  const int n = pt.n();
  const Vec dHdq = pt.dH.head(n);
  const Vec dHdp = pt.dH.segment(n, n);
  const Vec Fext = pt.Fext.size() == n ? pt.Fext : Vec::Zero(n);
  Vec E(2 * n + 1);
  E.head(n) = dHdp;
  E.segment(n, n) = pt.Ffr + Fext - dHdq;
  E(2 * n) = -dHdp.dot(pt.Ffr) / pt.dHdS();
  return E;
}

Vec contact_evolution_field(const HamiltonianPoint& pt) {
  const int n = pt.n();
  const Vec dHdq = pt.dH.head(n);
  const Vec dHdp = pt.dH.segment(n, n);
  Vec Y(2 * n + 1);
  Y.head(n) = dHdp;
  Y.segment(n, n) = -(dHdq + pt.p * pt.dHdS());
  Y(2 * n) = pt.p.dot(dHdp);
  return Y;
}

FieldCheck check_fields(const HamiltonianPoint& pt) {
  const PointStructure s = assemble_structure(pt);
  const Vec R = reeb_field(s);
  const Vec E = evolution_field(s, pt);
  const Vec Fext = force_covector(s.n, pt.Fext);

  FieldCheck c;
  c.flat_vs_coordinates = max_abs(Vec(E - evolution_field_coordinates(pt)));
  c.eta_of_evolution = std::abs(s.eta.dot(E));
  const double RH = pt.dH.dot(R);
  c.omega_identity = max_abs(Vec(contract_omega(s, E) - (pt.dH - RH * s.eta - Fext)));
  c.reeb_omega = max_abs(contract_omega(s, R));
  c.reeb_eta = std::abs(s.eta.dot(R) - 1.0);
  c.reeb_roundtrip = max_abs(Vec(flat_matrix(s) * R - s.eta));
  return c;
}

}  // namespace thermovi::geometry
