#ifndef OVMKIT_OVM_HPP
#define OVMKIT_OVM_HPP

#include <vector>

#include "ovmkit/framings.hpp"
#include "ovmkit/frames.hpp"
#include "ovmkit/types.hpp"

namespace ovmkit::ovm {

/// Power set of an atomic sample space; events are bitmasks over the atoms.
struct FiniteMeasurableSpace {
  int atom_count = 0;

  FiniteMeasurableSpace() = default;
  explicit FiniteMeasurableSpace(int atom_count_);

  Mask omega() const { return full_mask(atom_count); }
  bool admits(Mask b) const { return (b & ~omega()) == 0; }
};

/// Operator valued measure determined by its values on singletons.
/// Atom i is a range_dim x domain_dim matrix; E(B) sums the atoms in B.
struct FiniteOVM {
  FiniteMeasurableSpace space;
  Index domain_dim = 0;
  Index range_dim = 0;
  std::vector<Matrix> atoms;

  FiniteOVM() = default;
  FiniteOVM(Index domain_dim_, Index range_dim_, std::vector<Matrix> atoms_);
};

struct OVMClassification {
  double norm = 0.0;
  bool is_probability = false;
  bool is_positive = false;
  bool is_self_adjoint = false;
  bool is_projection_valued = false;
  bool is_spectral = false;
};

/// Isometric-style dilation of a positive measure: E(B) = V^* F(B) V with
/// block coordinate projections F and V stacking the atom square roots.
struct PositiveNaimarkDilation {
  Index dilation_dim = 0;
  Matrix v;
  std::vector<Matrix> f_atoms;
};

Matrix evaluate(const FiniteOVM& e, Mask b);

/// Complex measure <E(.)x, y> listed atom by atom.
std::vector<Scalar> scalar_measure(const FiniteOVM& e, const Vector& x,
                                   const Vector& y);

/// sup over all events of the operator norm of E(B), by full enumeration.
double ovm_norm(const FiniteOVM& e);

OVMClassification classify(const FiniteOVM& e, double tolerance = tol::classify);

FiniteOVM induce_from_frame(const frames::Frame& f);
FiniteOVM induce_from_framing(const framings::Framing& fr);

PositiveNaimarkDilation naimark_dilate_positive(const FiniteOVM& e);

}  // namespace ovmkit::ovm

#endif
