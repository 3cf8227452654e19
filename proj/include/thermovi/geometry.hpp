#pragma once

// Pointwise linear algebra of partially cosymplectic structures on T*Q x R.
//
// Coordinates are ordered (q^1..q^n, p_1..p_n, S) for both vectors and
// covectors; the pairing is the plain dot product. The two-form is stored as
// the matrix W with omega(v, w) = v^T W w, so the covector i_v omega is W^T v
// and the flat map v -> i_v omega + eta(v) eta has matrix W^T + eta eta^T.

#include "thermovi/linalg.hpp"

namespace thermovi::geometry {

struct PointStructure {
  int n = 0;
  Mat W;    // (2n+1)x(2n+1), antisymmetric, rank 2n
  Vec eta;  // (2n+1)

  int dim() const { return 2 * n + 1; }
};

/// Data of a Hamiltonian thermodynamic system at one point of T*Q x R.
struct HamiltonianPoint {
  Vec q;
  Vec p;
  double S = 0.0;
  Vec dH;    // (dH/dq, dH/dp, dH/dS), length 2n+1
  Vec Ffr;   // friction coefficients F^fr_i
  Vec Fext;  // external force coefficients F^ext_i (empty means zero)

  int n() const { return static_cast<int>(q.size()); }
  double dHdS() const { return dH(2 * n()); }
};

/// Matrix of the canonical dq^i ^ dp_i, with a zero S row and column.
Mat canonical_two_form(int n);

PointStructure make_structure(int n, const Vec& eta);

/// eta = -dH/dS dS - F^fr_i dq^i over the canonical omega. Throws
/// TemperatureDegenerateError when dH/dS = 0.
PointStructure assemble_structure(const HamiltonianPoint& pt);

Mat flat_matrix(const PointStructure& s);

/// Covector i_v omega (without the eta part).
Vec contract_omega(const PointStructure& s, const Vec& v);

bool is_almost_cosymplectic(const PointStructure& s);

/// R = flat^{-1}(eta). Throws StructureDegenerateError on a singular flat map.
Vec reeb_field(const PointStructure& s);

/// E = flat^{-1}(dH + eta - F^ext).
Vec evolution_field(const PointStructure& s, const HamiltonianPoint& pt);

/// Closed-form coordinate expression of the forced evolution field:
/// (dH/dp, F^fr + F^ext - dH/dq, -(dH/dp . F^fr) / (dH/dS)).
Vec evolution_field_coordinates(const HamiltonianPoint& pt);

/// Contact evolution field Y_H for eta_C = dS - p dq:
/// (dH/dp, -(dH/dq + p dH/dS), p . dH/dp).
Vec contact_evolution_field(const HamiltonianPoint& pt);

/// Residuals of the defining identities at one point; all should be ~0.
struct FieldCheck {
  double flat_vs_coordinates = 0.0;  // |E_flat - E_coord|_inf
  double eta_of_evolution = 0.0;     // |eta(E)|
  double omega_identity = 0.0;       // |i_E omega - (dH - R(H) eta - F^ext)|_inf
  double reeb_omega = 0.0;           // |i_R omega|_inf
  double reeb_eta = 0.0;             // |eta(R) - 1|
  double reeb_roundtrip = 0.0;       // |flat(R) - eta|_inf
};

FieldCheck check_fields(const HamiltonianPoint& pt);

}  // namespace thermovi::geometry
