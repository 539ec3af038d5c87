#include "ovmkit/types.hpp"

#include <cmath>

namespace ovmkit {

double operator_norm(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

Index rank_by_singular_values(const Matrix& m, double rel_threshold) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = rel_threshold * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

Matrix orthonormal_range_basis(const Matrix& m, double rel_threshold) {
  if (m.rows() == 0 || m.cols() == 0) return Matrix::Zero(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return Matrix::Zero(m.rows(), 0);
  const double cut = rel_threshold * sv(0);
  Index r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Matrix orthonormal_kernel_basis(const Matrix& m, double rel_threshold) {
  if (m.cols() == 0) return Matrix::Zero(0, 0);
  if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  Index r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = rel_threshold * sv(0);
    while (r < sv.size() && sv(r) > cut) ++r;
  }
  return svd.matrixV().rightCols(m.cols() - r);
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i) {
      const Scalar v = m(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  return true;
}

void ensure_finite(const Matrix& m, const std::string& what) {
  if (!all_finite(m)) throw malformed_input(what + ": entries must be finite");
}

}  // namespace ovmkit
