#ifndef OVMKIT_TYPES_HPP
#define OVMKIT_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ovmkit {

using Scalar = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Event over an atomic measurable space with at most 24 atoms, one bit per atom.
using Mask = std::uint32_t;

namespace tol {
inline constexpr double parseval = 1e-8;
inline constexpr double duality = 1e-8;
inline constexpr double frame_rel = 1e-10;
inline constexpr double rank_rel = 1e-10;
inline constexpr double range_residual = 1e-10;
inline constexpr double classify = 1e-10;
inline constexpr double psd_clamp = 1e-12;
inline constexpr double default_check = 1e-8;
}  // namespace tol

namespace limits {
inline constexpr int max_atoms = 24;
inline constexpr int max_alpha_atoms = 20;
inline constexpr int exhaustive_atoms = 12;
inline constexpr int max_amplified_dim = 64;
}  // namespace limits

class error : public std::runtime_error {
 public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Input data is structurally unusable (ragged matrices, bad JSON, non-finite entries).
class malformed_input : public error {
 public:
  explicit malformed_input(const std::string& what) : error(what) {}
};

/// Input parsed fine but violates a mathematical precondition of the operation.
class precondition_error : public error {
 public:
  explicit precondition_error(const std::string& what) : error(what) {}
};

/// An enumeration or amplification bound was exceeded.
class resource_error : public error {
 public:
  explicit resource_error(const std::string& what) : error(what) {}
};

double operator_norm(const Matrix& m);
Index rank_by_singular_values(const Matrix& m, double rel_threshold = tol::rank_rel);
Matrix orthonormal_range_basis(const Matrix& m, double rel_threshold = tol::rank_rel);
Matrix orthonormal_kernel_basis(const Matrix& m, double rel_threshold = tol::rank_rel);
bool all_finite(const Matrix& m);
void ensure_finite(const Matrix& m, const std::string& what);

inline Mask full_mask(int atom_count) {
  return atom_count >= 32 ? ~Mask{0} : ((Mask{1} << atom_count) - 1);
}

}  // namespace ovmkit

#endif
