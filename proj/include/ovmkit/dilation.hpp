#ifndef OVMKIT_DILATION_HPP
#define OVMKIT_DILATION_HPP

#include <optional>
#include <utility>
#include <vector>

#include "ovmkit/ovm.hpp"
#include "ovmkit/types.hpp"

namespace ovmkit::dilation {

/// Element of the elementary dilation space, one coordinate block per atom,
/// block i expressed in an orthonormal basis of the range of E({i}).
struct ElementaryVector {
  std::vector<Vector> coords;
};

/// Minimal-style dilation built from the ranges of the atoms.
///
/// The space is the direct sum of the atom ranges; S sums the blocks back
/// into the range space, T sends x to the tuple (E({i})x)_i, and F(B) keeps
/// the blocks indexed by B.  E(B) = S F(B) T holds by construction.
struct ElementaryDilationSystem {
  ovm::FiniteOVM source;
  std::vector<Matrix> range_bases;
  std::vector<Index> offsets;
  Index total_dim = 0;
  Matrix s_map;
  Matrix t_map;

  int atom_count() const { return source.space.atom_count; }
  Index block_rank(int i) const { return range_bases[i].cols(); }
};

/// Dilation-shaped triple (S, T, F) on an explicit space Z, with F given by
/// its values on singletons.
struct GenericDilationSystem {
  Index z_dim = 0;
  std::vector<Matrix> f_atoms;
  Matrix s_map;
  Matrix t_map;
};

struct MinimalityReport {
  bool injective = false;
  bool linearly_minimal = false;
  Index span_dim = 0;
  Index z_dim = 0;
  Index kernel_dim = 0;
  double worst_factorization_residual = 0.0;
  Mask worst_mask = 0;
  double injectivity_residual = 0.0;
};

struct DilationNormReport {
  int samples = 0;
  double worst_s_ratio = 0.0;
  double worst_f_ratio = 0.0;
  double worst_t_excess = 0.0;
  double worst_f_residual = 0.0;
  bool s_contractive = false;
  bool t_dominated = false;
  bool f_contractive = false;
  bool f_projection_valued = false;
  bool f_probability = false;
  bool f_spectral = false;
  bool ok = false;
  std::optional<ElementaryVector> counterexample;
};

struct RankReport {
  std::vector<std::pair<Index, Index>> atom_ranks;  // (rank F({i}), rank E({i}))
};

struct MaskRankRow {
  Index sup_rank_e = 0;  // largest atom rank inside the event
  Index sum_rank_e = 0;  // sum of atom ranks inside the event
  Index rank_f = 0;      // rank of F(B) itself
};

ElementaryDilationSystem build_elementary(const ovm::FiniteOVM& e);

ElementaryVector vector_from_ambient(const ElementaryDilationSystem& sys,
                                     const std::vector<Vector>& components);
ElementaryVector vector_from_stacked(const ElementaryDilationSystem& sys,
                                     const Vector& stacked);
Vector stack(const ElementaryDilationSystem& sys, const ElementaryVector& f);

/// Combination sum_j c_j E_{B_j, x_j} expressed in block coordinates.
ElementaryVector generated_vector(const ElementaryDilationSystem& sys,
                                  const std::vector<Mask>& events,
                                  const std::vector<Scalar>& coefficients,
                                  const std::vector<Vector>& points);

Vector apply_s(const ElementaryDilationSystem& sys, const ElementaryVector& f);
ElementaryVector apply_t(const ElementaryDilationSystem& sys, const Vector& x);
ElementaryVector apply_f(const ElementaryDilationSystem& sys, Mask b,
                         const ElementaryVector& f);

/// sup over events B of the norm of sum of the blocks of f indexed by B.
double alpha_norm(const ElementaryDilationSystem& sys, const ElementaryVector& f);

DilationNormReport verify_dilation_norm_conditions(
    const ElementaryDilationSystem& sys, int vector_samples = 200,
    std::uint64_t seed = 1);

GenericDilationSystem to_generic(const ElementaryDilationSystem& sys);

MinimalityReport verify_generic(const GenericDilationSystem& sys,
                                const ovm::FiniteOVM& e,
                                double tolerance = tol::classify);

/// Multiplication measure on k support atoms plus j extra atoms, dilated
/// through the weighted-mean extension; linearly minimal but not injective.
std::pair<ovm::FiniteOVM, GenericDilationSystem> example_3_9(
    int support_atoms, int extra_atoms, const std::vector<Scalar>& mean_weights);

/// Cuts Z down to the span of F(Sigma) T X.
GenericDilationSystem restriction_reduce(const GenericDilationSystem& sys);

/// Quotients Z by the largest F-invariant subspace of ker S.
GenericDilationSystem quotient_reduce(const GenericDilationSystem& sys,
                                      const ovm::FiniteOVM& e);

RankReport rank_report(const GenericDilationSystem& sys, const ovm::FiniteOVM& e);
MaskRankRow mask_rank_row(const GenericDilationSystem& sys,
                          const ovm::FiniteOVM& e, Mask b);

}  // namespace ovmkit::dilation

#endif
