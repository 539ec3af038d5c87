#ifndef OVMKIT_RANDOM_HPP
#define OVMKIT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "ovmkit/algmaps.hpp"
#include "ovmkit/frames.hpp"
#include "ovmkit/framings.hpp"
#include "ovmkit/ovm.hpp"
#include "ovmkit/types.hpp"

namespace ovmkit::random {

/// Deterministic source of Gaussian samples; the same seed reproduces the
/// same stream on every platform because the transforms are spelled out here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in (0, 1].
  double uniform();
  double normal();
  /// Standard complex Gaussian, E|z|^2 = 1.
  Scalar complex_normal();

  Vector vector(Index n);
  Matrix matrix(Index rows, Index cols);

 private:
  std::mt19937_64 gen_;
};

frames::Frame random_frame(Index dim, Index count, std::uint64_t seed);
frames::Frame random_parseval_frame(Index dim, Index count, std::uint64_t seed);

/// A frame together with its canonical dual.
std::pair<frames::Frame, frames::Frame> random_dual_pair(Index dim, Index count,
                                                         std::uint64_t seed);

/// Dual pair with the mass shifted between the families by random nonzero
/// complex scales, so the two sides are unbalanced but still pair to identity.
framings::Framing random_framing(Index dim, Index count, std::uint64_t seed);

/// Positive atoms G_i G_i^*; with normalize the total measure becomes the
/// identity by conjugating with the inverse square root of the sum.
ovm::FiniteOVM random_positive_ovm(int atoms, Index dim, std::uint64_t seed,
                                   bool normalize = false);

/// Unstructured complex atoms, for exercising classification on generic data.
ovm::FiniteOVM random_ovm(int atoms, Index domain_dim, Index range_dim,
                          std::uint64_t seed);

algmaps::LinearMapOnAlgebra random_map(const algmaps::FiniteAlgebra& algebra,
                                       Index target_dim, std::uint64_t seed);

}  // namespace ovmkit::random

#endif
