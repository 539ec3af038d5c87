#ifndef OVMKIT_FRAMINGS_HPP
#define OVMKIT_FRAMINGS_HPP

#include <vector>

#include "ovmkit/frames.hpp"
#include "ovmkit/types.hpp"

namespace ovmkit::framings {

/// Pair of vector families meant to satisfy sum x_i y_i^* = identity.
struct Framing {
  Index dim = 0;
  std::vector<Vector> x;
  std::vector<Vector> y;

  Framing() = default;
  Framing(Index dim_, std::vector<Vector> x_, std::vector<Vector> y_);

  Index size() const { return static_cast<Index>(x.size()); }
};

struct FramingCheck {
  bool ok = false;
  double residual = 0.0;
};

struct RescalingResult {
  std::vector<Scalar> alphas;
  frames::Frame rescaled_x;
  frames::Frame rescaled_y;
  frames::FrameBounds x_bounds;
  frames::FrameBounds y_bounds;
  bool is_dual_pair_after = false;
};

/// Partial sums of |c_n|^2 for c_n = integral over (0,1] of t^(-1/2) e^(-2 pi i n t) dt.
///
/// coefficients holds c_0 .. c_max(cutoffs); partial_sums[j] accumulates
/// |c_n|^2 over |n| <= cutoffs[j]; tail_products[j] is cutoffs[j]*|c_cutoff|^2.
struct DivergenceReport {
  std::vector<int> cutoffs;
  std::vector<double> partial_sums;
  std::vector<double> tail_products;
  std::vector<Scalar> coefficients;
  long quadrature_nodes = 0;
  bool accuracy_warning = false;
};

FramingCheck verify_framing(const Framing& fr, double tolerance = tol::duality);

/// Moves norm between the two families, alpha_i = sqrt(|y_i|/|x_i|), preserving
/// the pairing exactly; pairs that vanish on both sides are dropped.
RescalingResult rescale_balanced(const Framing& fr);

/// Quadrature study of the coefficient decay witnessing a framing whose
/// rescaled families cannot both be frames.
DivergenceReport fourier_framing_report(const std::vector<int>& cutoffs,
                                        long quadrature_nodes);

/// Nodes and weights of the composite Gauss-Legendre rule on [0,1].
void gauss_legendre_composite(long total_nodes, std::vector<double>& nodes,
                              std::vector<double>& weights);

}  // namespace ovmkit::framings

#endif
