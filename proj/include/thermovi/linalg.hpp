#pragma once

#include <Eigen/Dense>

namespace thermovi {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Solves A x = b with LU and partial pivoting. Throws SingularMatrixError
/// when a pivot is zero relative to the scale of A.
Vec solve_dense(const Mat& A, const Vec& b);

/// True when the partial-pivoting LU of A has no negligible pivot.
bool is_invertible(const Mat& A);

inline double max_abs(const Vec& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }
inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace thermovi
