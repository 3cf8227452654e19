#include "thermovi/linalg.hpp"

#include <limits>

#include "thermovi/errors.hpp"

namespace thermovi {

namespace {

bool pivots_ok(const Eigen::PartialPivLU<Mat>& lu, double scale) {
  const auto n = lu.matrixLU().rows();
  const double floor = 16.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(lu.matrixLU()(i, i)) > floor)) return false;
  }
  return true;
}

}  // namespace

bool is_invertible(const Mat& A) {
  if (A.rows() != A.cols()) return false;
  if (A.rows() == 0) return true;
  const double scale = max_abs(A);
  if (!(scale > 0.0)) return false;
  Eigen::PartialPivLU<Mat> lu(A);
  return pivots_ok(lu, scale);
}

Vec solve_dense(const Mat& A, const Vec& b) {
  if (A.rows() != A.cols() || A.rows() != b.size()) {
    throw SingularMatrixError("solve_dense: dimension mismatch");
  }
  const double scale = max_abs(A);
  if (!(scale > 0.0)) throw SingularMatrixError("solve_dense: zero matrix");
  Eigen::PartialPivLU<Mat> lu(A);
  if (!pivots_ok(lu, scale)) throw SingularMatrixError("solve_dense: singular matrix");
  return lu.solve(b);
}

}  // namespace thermovi
