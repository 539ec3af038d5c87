#include "ovmkit/ovm.hpp"

#include <bit>
#include <random>
#include <utility>

namespace ovmkit::ovm {

FiniteMeasurableSpace::FiniteMeasurableSpace(int atom_count_)
    : atom_count(atom_count_) {
  if (atom_count < 1 || atom_count > limits::max_atoms)
    throw malformed_input("measurable space: atom count must lie in [1, " +
                          std::to_string(limits::max_atoms) + "]");
}

FiniteOVM::FiniteOVM(Index domain_dim_, Index range_dim_,
                     std::vector<Matrix> atoms_)
    : space(static_cast<int>(atoms_.size())),
      domain_dim(domain_dim_),
      range_dim(range_dim_),
      atoms(std::move(atoms_)) {
  if (domain_dim < 1 || range_dim < 1)
    throw malformed_input("measure: dimensions must be at least 1");
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].rows() != range_dim || atoms[i].cols() != domain_dim)
      throw malformed_input("measure: atom " + std::to_string(i) +
                            " has the wrong shape");
    ensure_finite(atoms[i], "measure atom " + std::to_string(i));
  }
}

Matrix evaluate(const FiniteOVM& e, Mask b) {
  if (!e.space.admits(b))
    throw malformed_input("measure: event has bits beyond the atom count");
  Matrix sum = Matrix::Zero(e.range_dim, e.domain_dim);
  for (int i = 0; i < e.space.atom_count; ++i)
    if (b & (Mask{1} << i)) sum += e.atoms[i];
  return sum;
}

std::vector<Scalar> scalar_measure(const FiniteOVM& e, const Vector& x,
                                   const Vector& y) {
  if (x.size() != e.domain_dim || y.size() != e.range_dim)
    throw malformed_input("scalar measure: vector dimensions do not match");
  std::vector<Scalar> values;
  values.reserve(e.atoms.size());
  for (const auto& a : e.atoms) values.push_back(y.dot(a * x));
  return values;
}

double ovm_norm(const FiniteOVM& e) {
  const int m = e.space.atom_count;
  const Mask omega = e.space.omega();
  double best = 0.0;
  if (m <= limits::exhaustive_atoms) {
    for (Mask b = 1; b <= omega; ++b) {
      Matrix sum = Matrix::Zero(e.range_dim, e.domain_dim);
      for (int i = 0; i < m; ++i)
        if (b & (Mask{1} << i)) sum += e.atoms[i];
      best = std::max(best, operator_norm(sum));
    }
    return best;
  }
  // Gray-code walk touches one atom per step; the running sum is rebuilt
  // periodically so rounding cannot accumulate over millions of steps.
  Matrix sum = Matrix::Zero(e.range_dim, e.domain_dim);
  Mask prev = 0;
  for (Mask k = 1; k <= omega; ++k) {
    const Mask b = k ^ (k >> 1);
    if ((k & 0xFFF) == 0) {
      sum.setZero();
      for (int i = 0; i < m; ++i)
        if (b & (Mask{1} << i)) sum += e.atoms[i];
    } else {
      const Mask flip = b ^ prev;
      const int i = std::countr_zero(flip);
      if (b & flip)
        sum += e.atoms[i];
      else
        sum -= e.atoms[i];
    }
    prev = b;
    best = std::max(best, operator_norm(sum));
  }
  return best;
}

OVMClassification classify(const FiniteOVM& e, double tolerance) {
  if (e.domain_dim != e.range_dim)
    throw precondition_error(
        "classification requires a square measure (domain and range agree)");
  const Index d = e.domain_dim;
  const int m = e.space.atom_count;
  const Mask omega = e.space.omega();

  OVMClassification c;
  c.norm = ovm_norm(e);
  c.is_probability =
      operator_norm(evaluate(e, omega) - Matrix::Identity(d, d)) <= tolerance;

  c.is_self_adjoint = true;
  c.is_positive = true;
  for (const auto& a : e.atoms) {
    const double asym = operator_norm(a - a.adjoint());
    if (asym > tolerance) c.is_self_adjoint = false;
    if (asym > tolerance) {
      c.is_positive = false;
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    if (es.eigenvalues()(0) < -tolerance) c.is_positive = false;
  }

  const bool exhaustive = m <= limits::exhaustive_atoms;
  std::vector<Matrix> table;
  if (exhaustive) {
    table.resize(omega + 1);
    table[0] = Matrix::Zero(d, d);
    for (Mask b = 1; b <= omega; ++b) {
      const int i = std::countr_zero(b);
      table[b] = table[b & (b - 1)] + e.atoms[i];
    }
  }

  c.is_projection_valued = true;
  c.is_spectral = true;
  if (exhaustive) {
    for (Mask b = 0; b <= omega && c.is_projection_valued; ++b)
      if (operator_norm(table[b] * table[b] - table[b]) > tolerance)
        c.is_projection_valued = false;
    for (Mask a = 0; a <= omega && c.is_spectral; ++a)
      for (Mask b = 0; b <= omega; ++b)
        if (operator_norm(table[a & b] - table[a] * table[b]) > tolerance) {
          c.is_spectral = false;
          break;
        }
  } else {
    std::mt19937_64 gen(0x9e3779b97f4a7c15ull);
    std::uniform_int_distribution<Mask> pick(0, omega);
    for (int t = 0; t < 1000 && c.is_projection_valued; ++t) {
      const Matrix eb = evaluate(e, pick(gen));
      if (operator_norm(eb * eb - eb) > tolerance) c.is_projection_valued = false;
    }
    for (int t = 0; t < 1000 && c.is_spectral; ++t) {
      const Mask a = pick(gen), b = pick(gen);
      if (operator_norm(evaluate(e, a & b) - evaluate(e, a) * evaluate(e, b)) >
          tolerance)
        c.is_spectral = false;
    }
  }
  return c;
}

FiniteOVM induce_from_frame(const frames::Frame& f) {
  std::vector<Matrix> atoms;
  atoms.reserve(f.vectors.size());
  for (const auto& v : f.vectors) atoms.push_back(v * v.adjoint());
  return FiniteOVM(f.dim, f.dim, std::move(atoms));
}

FiniteOVM induce_from_framing(const framings::Framing& fr) {
  const auto check = verify_framing(fr);
  if (!check.ok)
    throw precondition_error("not-a-framing: duality defect " +
                             std::to_string(check.residual));
  std::vector<Matrix> atoms;
  atoms.reserve(fr.x.size());
  for (Index i = 0; i < fr.size(); ++i)
    atoms.push_back(fr.x[i] * fr.y[i].adjoint());
  return FiniteOVM(fr.dim, fr.dim, std::move(atoms));
}

PositiveNaimarkDilation naimark_dilate_positive(const FiniteOVM& e) {
  if (e.domain_dim != e.range_dim)
    throw precondition_error("positive dilation requires a square measure");
  const Index d = e.domain_dim;
  const int m = e.space.atom_count;

  PositiveNaimarkDilation out;
  out.dilation_dim = static_cast<Index>(m) * d;
  out.v = Matrix::Zero(out.dilation_dim, d);
  out.f_atoms.reserve(m);
  for (int i = 0; i < m; ++i) {
    const Matrix& a = e.atoms[i];
    if (operator_norm(a - a.adjoint()) > tol::classify)
      throw precondition_error("positive dilation: atom " + std::to_string(i) +
                               " is not self-adjoint");
    Eigen::SelfAdjointEigenSolver<Matrix> es((a + a.adjoint()) / 2.0);
    RealVector ev = es.eigenvalues();
    if (ev(0) < -tol::psd_clamp)
      throw precondition_error("positive dilation: atom " + std::to_string(i) +
                               " has negative eigenvalue " + std::to_string(ev(0)));
    for (Index k = 0; k < ev.size(); ++k) ev(k) = std::sqrt(std::max(0.0, ev(k)));
    out.v.middleRows(static_cast<Index>(i) * d, d) =
        es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

    Matrix f = Matrix::Zero(out.dilation_dim, out.dilation_dim);
    f.block(static_cast<Index>(i) * d, static_cast<Index>(i) * d, d, d) =
        Matrix::Identity(d, d);
    out.f_atoms.push_back(std::move(f));
  }
  return out;
}

}  // namespace ovmkit::ovm
