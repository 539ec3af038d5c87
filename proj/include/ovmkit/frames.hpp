#ifndef OVMKIT_FRAMES_HPP
#define OVMKIT_FRAMES_HPP

#include <vector>

#include "ovmkit/types.hpp"

namespace ovmkit::frames {

/// Finite sequence of vectors in C^dim, not required to span.
struct Frame {
  Index dim = 0;
  std::vector<Vector> vectors;

  Frame() = default;
  Frame(Index dim_, std::vector<Vector> vectors_);

  Index size() const { return static_cast<Index>(vectors.size()); }
};

struct FrameBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Frame realized as the compression of a basis of a larger space.
///
/// The ambient space carries the standard inner product; `embed` identifies the
/// original space isometrically inside it, `projection` is the orthogonal
/// projection onto that copy, and `basis`/`dual_basis` form a biorthogonal
/// pair whose projections recover the frame and its dual.
struct OrthogonalDilation {
  Index ambient_dim = 0;
  Matrix embed;
  std::vector<Vector> basis;
  std::vector<Vector> dual_basis;
  Matrix projection;
};

/// Rows are the conjugated frame vectors, so (analysis(x))_i = <x, x_i>.
Matrix analysis_operator(const Frame& f);

/// Sum of the rank-one operators x_i x_i^*.
Matrix frame_operator(const Frame& f);

/// Extreme eigenvalues of the frame operator; lower bound 0 means not a frame.
FrameBounds frame_bounds(const Frame& f);

bool is_frame(const Frame& f);
bool is_parseval(const Frame& f, double tolerance = tol::parseval);
bool is_riesz_basis(const Frame& f);

/// Applies the inverse frame operator to every vector.
Frame canonical_dual(const Frame& f);

/// Largest deviation of sum x_i y_i^* from the identity, in operator norm.
double duality_defect(const Frame& x, const Frame& y);

/// Realizes a Parseval frame as the compression of an orthonormal basis.
OrthogonalDilation dilate_parseval(const Frame& f, double tolerance = tol::parseval);

/// Realizes a dual pair of frames as compressions of a basis and its dual basis.
OrthogonalDilation dilate_dual_pair(const Frame& x, const Frame& y,
                                    double tolerance = tol::duality);

/// Frame bounds of a weighted sample family, sum of w_i F(t_i) F(t_i)^*.
FrameBounds quadrature_frame_bounds(const std::vector<Vector>& samples,
                                    const std::vector<double>& weights);

}  // namespace ovmkit::frames

#endif
