#ifndef OVMKIT_ALGMAPS_HPP
#define OVMKIT_ALGMAPS_HPP

#include <vector>

#include "ovmkit/types.hpp"

namespace ovmkit::algmaps {

/// Unital subalgebra of the k x k matrices, described by a basis together
/// with its structure constants.
///
/// right_mult[l] stores the constants organized by right factor: column b
/// holds the coordinates of basis[b] * basis[l].
struct FiniteAlgebra {
  Index ambient = 0;
  std::vector<Matrix> basis;
  Vector identity_coords;
  std::vector<Matrix> right_mult;

  Index size() const { return static_cast<Index>(basis.size()); }
  Matrix element(const Vector& coords) const;
  Matrix identity() const { return element(identity_coords); }

  /// Coordinate matrix of right multiplication by the element with the given
  /// coordinates.
  Matrix right_mult_of(const Vector& coords) const;
};

/// Linear map from the algebra into the operators on C^target_dim, given by
/// its values on the basis.
struct LinearMapOnAlgebra {
  FiniteAlgebra algebra;
  Index target_dim = 0;
  std::vector<Matrix> values;

  Matrix apply(const Vector& coords) const;
};

/// Factorization phi = S pi T through the span W of the maps a -> phi(a b) x,
/// with pi(a) acting by right translation.
///
/// Elements of W are target_dim x p coordinate matrices; w_basis holds an
/// orthonormal basis of W as stacked columns.  When the span is all of
/// L(A, V) the canonical unit basis is used, which keeps pi exact.
struct AlgebraicDilation {
  Index w_dim = 0;
  bool canonical = false;
  Matrix w_basis;
  std::vector<Matrix> pi;
  Matrix t_map;
  Matrix s_map;
};

struct DilationNorms {
  double s_norm = 0.0;
  double t_norm = 0.0;
  double pi_ratio_max = 0.0;
};

struct CbProfile {
  std::vector<int> levels;
  std::vector<double> lower_bounds;
};

FiniteAlgebra make_algebra(Index ambient, std::vector<Matrix> basis);
FiniteAlgebra diagonal_algebra(int m);
FiniteAlgebra upper_triangular_2();
FiniteAlgebra full_matrix_algebra(Index k);

LinearMapOnAlgebra make_map(FiniteAlgebra algebra, std::vector<Matrix> values);
LinearMapOnAlgebra identity_representation(const FiniteAlgebra& algebra);
LinearMapOnAlgebra transpose_map(Index k);

AlgebraicDilation build_algebraic_dilation(const LinearMapOnAlgebra& phi);

/// pi evaluated at the element with the given algebra coordinates.
Matrix dilation_pi(const AlgebraicDilation& dil, const Vector& coords);

/// Lower-bound estimate of sup |M u|_2 over coordinates u of algebra elements
/// with operator norm at most one.
double algebra_ball_image_norm(const Matrix& coefficient_map,
                               const FiniteAlgebra& algebra, int restarts = 8,
                               int iterations = 100);

DilationNorms dilation_operator_norms(const AlgebraicDilation& dil,
                                      const LinearMapOnAlgebra& phi);

/// Lower-bound estimate of the norm of the level-n amplification of phi, by
/// alternating maximization over the matrix ball and the unit sphere.
double amplification_norm(const LinearMapOnAlgebra& phi, int level,
                          int restarts = 16, int iterations = 200);

CbProfile cb_profile(const LinearMapOnAlgebra& phi, int max_level);

}  // namespace ovmkit::algmaps

#endif
